use super::Place;
use crate::error::{Error, Result};

/// Splits the indices of `places` into `mu` parts such that no part holds two
/// places with the same `x`. Whole fibers are dealt largest first to the
/// currently smallest part, so part sizes differ by at most one whenever that
/// is possible.
pub fn x_partition(places: &[Place], mu: usize) -> Result<Vec<Vec<usize>>> {
    if mu == 0 {
        return Err(Error::InvalidParams("partition into zero parts".into()));
    }
    let mut fibers: Vec<(crate::gf::Fe, Vec<usize>)> = Vec::new();
    for (j, p) in places.iter().enumerate() {
        match fibers.iter_mut().find(|(x, _)| *x == p.x) {
            Some((_, v)) => v.push(j),
            None => fibers.push((p.x, vec![j])),
        }
    }
    if let Some((x, v)) = fibers.iter().find(|(_, v)| v.len() > mu) {
        return Err(Error::InvalidParams(format!(
            "{} places share x = {} but only {mu} parts are available",
            v.len(),
            x.0
        )));
    }
    fibers.sort_by_key(|f| std::cmp::Reverse(f.1.len()));
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); mu];
    for (_, fiber) in fibers {
        let mut order: Vec<usize> = (0..mu).collect();
        order.sort_by_key(|&i| (parts[i].len(), i));
        for (k, j) in fiber.into_iter().enumerate() {
            parts[order[k]].push(j);
        }
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(parts)
}
