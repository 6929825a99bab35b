// Dense matrix backend used as an oracle for program execution.
#![allow(dead_code)]

use mg_components::Partition;
use mg_ir::{Backend, IrError, Op};
use nalgebra::{DMatrix, DVector};

pub struct Dense {
    /// Number of levels; level l has 2^(levels - l) - 1 points.
    pub levels: usize,
    pub calls: usize,
}

pub fn size(levels: usize, l: usize) -> usize {
    (1 << (levels - l)) - 1
}

impl Dense {
    pub fn new(levels: usize) -> Self {
        Dense { levels, calls: 0 }
    }

    pub fn a(&self, l: usize) -> DMatrix<f64> {
        let n = size(self.levels, l);
        let h = 1.0 / (n + 1) as f64;
        DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => 2.0 / (h * h),
            1 => -1.0 / (h * h),
            _ => 0.0,
        })
    }

    /// Linear interpolation from level l+1 to level l.
    pub fn p(&self, l: usize) -> DMatrix<f64> {
        let (nf, nc) = (size(self.levels, l), size(self.levels, l + 1));
        let mut m = DMatrix::zeros(nf, nc);
        for j in 0..nc {
            let f = 2 * j + 1;
            m[(f, j)] = 1.0;
            m[(f - 1, j)] = 0.5;
            m[(f + 1, j)] = 0.5;
        }
        m
    }

    pub fn r(&self, l: usize) -> DMatrix<f64> {
        self.p(l).transpose() * 0.5
    }
}

pub fn red(i: usize) -> bool {
    (i + 1) % 2 == 0
}

impl Backend for Dense {
    type Value = DVector<f64>;
    type Error = IrError;

    fn zero(&mut self, level: usize) -> Result<DVector<f64>, IrError> {
        Ok(DVector::zeros(size(self.levels, level)))
    }

    fn residual(&mut self, level: usize, x: &DVector<f64>, b: &DVector<f64>) -> Result<DVector<f64>, IrError> {
        self.calls += 1;
        Ok(b - self.a(level) * x)
    }

    fn apply(&mut self, op: &Op, level: usize, v: &DVector<f64>) -> Result<DVector<f64>, IrError> {
        self.calls += 1;
        Ok(match op {
            Op::Smoother(_) => v.component_div(&self.a(level).diagonal()),
            Op::Restrict(_) => self.r(level) * v,
            Op::Prolong => self.p(level - 1) * v,
            Op::CoarseSolve(_) => self.a(level).lu().solve(v).unwrap(),
        })
    }

    fn update(
        &mut self,
        _level: usize,
        x: &DVector<f64>,
        c: &DVector<f64>,
        omega: f64,
        part: Partition,
        _component: Option<usize>,
    ) -> Result<DVector<f64>, IrError> {
        self.calls += 1;
        Ok(DVector::from_fn(x.len(), |i, _| {
            let on = match part {
                Partition::All => true,
                Partition::Red => red(i),
                Partition::Black => !red(i),
            };
            if on {
                x[i] + omega * c[i]
            } else {
                x[i]
            }
        }))
    }
}
