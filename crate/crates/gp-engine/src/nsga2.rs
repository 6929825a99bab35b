use crate::Fitness;
use rand::seq::SliceRandom;
use rand::Rng;

/// `a` is no worse in every objective and better in at least one.
pub fn dominates(a: &Fitness, b: &Fitness) -> bool {
    let mut better = false;
    for (x, y) in a.objectives.iter().zip(&b.objectives) {
        if x > y {
            return false;
        }
        better |= x < y;
    }
    better
}

/// Non-dominated sorting. Fronts hold population indices in ascending order.
pub fn nsga2_fronts(pop: &[Fitness]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominates_list: Vec<Vec<usize>> = vec![vec![]; n];
    for i in 0..n {
        for j in i + 1..n {
            if dominates(&pop[i], &pop[j]) {
                dominates_list[i].push(j);
                dominated_by[j] += 1;
            } else if dominates(&pop[j], &pop[i]) {
                dominates_list[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }
    let mut fronts = vec![];
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = vec![];
        for &i in &current {
            for &j in &dominates_list[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Crowding distance of each member of `front`, in the order given.
pub fn crowding(pop: &[Fitness], front: &[usize]) -> Vec<f64> {
    let m = front.len();
    let mut dist = vec![0.0; m];
    if m <= 2 {
        return vec![f64::INFINITY; m];
    }
    for k in 0..2 {
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&a, &b| pop[front[a]].objectives[k].total_cmp(&pop[front[b]].objectives[k]).then(a.cmp(&b)));
        let lo = pop[front[order[0]]].objectives[k];
        let hi = pop[front[order[m - 1]]].objectives[k];
        dist[order[0]] = f64::INFINITY;
        dist[order[m - 1]] = f64::INFINITY;
        if hi > lo {
            for w in 1..m - 1 {
                let prev = pop[front[order[w - 1]]].objectives[k];
                let next = pop[front[order[w + 1]]].objectives[k];
                dist[order[w]] += (next - prev) / (hi - lo);
            }
        }
    }
    dist
}

/// Front rank and crowding distance of every individual.
fn rank_and_crowding(pop: &[Fitness]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; pop.len()];
    let mut crowd = vec![0.0; pop.len()];
    for (r, front) in nsga2_fronts(pop).iter().enumerate() {
        for (&i, d) in front.iter().zip(crowding(pop, front)) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

/// `k` binary tournaments on (rank, crowding distance).
pub fn select_parents(pop: &[Fitness], k: usize, rng: &mut impl Rng) -> Vec<usize> {
    if pop.is_empty() {
        return vec![];
    }
    let (rank, crowd) = rank_and_crowding(pop);
    (0..k)
        .map(|_| {
            let a = rng.random_range(0..pop.len());
            let b = rng.random_range(0..pop.len());
            if rank[a] != rank[b] {
                if rank[a] < rank[b] { a } else { b }
            } else if crowd[a] != crowd[b] {
                if crowd[a] > crowd[b] { a } else { b }
            } else if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        })
        .collect()
}

/// Keeps `mu` individuals front by front. The front that does not fit is
/// truncated by descending crowding distance; ties go to the lower position
/// after a seeded shuffle.
pub fn select_elitist(pop: &[Fitness], mu: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(mu);
    for front in nsga2_fronts(pop) {
        if chosen.len() + front.len() <= mu {
            chosen.extend(&front);
            if chosen.len() == mu {
                break;
            }
            continue;
        }
        let d = crowding(pop, &front);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.shuffle(rng);
        order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
        chosen.extend(order.into_iter().take(mu - chosen.len()).map(|i| front[i]));
        break;
    }
    chosen
}
