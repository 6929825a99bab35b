use bench_problems::{CycleKind, CycleSpec};
use mg_ir::{level_name, Coloring};

/// Token string of the derivation tree that spells out a textbook cycle in
/// the grammar over `depth` levels. Coarse-grid corrections use ω = 1.
pub fn cycle_tree(depth: usize, spec: &CycleSpec) -> String {
    let b = TreeBuilder { depth, spec };
    b.cycle(0, spec.kind, Term::S("x0_h".into()))
}

enum Term {
    S(String),
    C(String),
}

struct TreeBuilder<'a> {
    depth: usize,
    spec: &'a CycleSpec,
}

impl TreeBuilder<'_> {
    fn correction(&self, l: usize, t: Term) -> String {
        match t {
            Term::C(c) => c,
            Term::S(s) => format!("residual_{} {s}", level_name(l)),
        }
    }

    fn smooth(&self, l: usize, t: Term) -> Term {
        let n = level_name(l);
        let part = if self.spec.coloring == Coloring::RedBlack { "rb" } else { "none" };
        let c = self.correction(l, t);
        Term::S(format!("smooth_{n} w{} {part} {}_{n} {c}", self.spec.omega_index, self.spec.smoother.name()))
    }

    fn cycle(&self, l: usize, kind: CycleKind, mut t: Term) -> String {
        for _ in 0..self.spec.pre {
            t = self.smooth(l, t);
        }
        let c = self.correction(l, t);
        let mut s = if l + 2 == self.depth {
            format!("cgs_{} w18 {c}", level_name(l))
        } else {
            let mut inner = Term::C(format!("coarsening_{} {c}", level_name(l + 1)));
            let visits: &[CycleKind] = match kind {
                CycleKind::V => &[CycleKind::V],
                CycleKind::W => &[CycleKind::W, CycleKind::W],
                CycleKind::F => &[CycleKind::F, CycleKind::V],
            };
            for &k in visits {
                inner = Term::S(self.cycle(l + 1, k, inner));
            }
            let Term::S(inner) = inner else { unreachable!("cycles end in a state") };
            format!("cgc_{} w18 {inner}", level_name(l))
        };
        for _ in 0..self.spec.post {
            let Term::S(x) = self.smooth(l, Term::S(s)) else { unreachable!() };
            s = x;
        }
        s
    }
}
