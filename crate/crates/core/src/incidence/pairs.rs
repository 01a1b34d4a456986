use crate::error::{Error, Result};
use crate::flats::{gaussian_binomial_u64, Flat};
use crate::gf::FieldCtx;
use crate::linalg::rref_in_place;

fn check_family(flats: &[Flat], q: u32, d: usize, dim: usize, what: &str) -> Result<()> {
    match flats.iter().find(|f| f.q() != q || f.ambient_dim() != d || f.dim() != dim) {
        Some(f) => Err(Error::ParameterMismatch(format!(
            "{what} contains a {}-flat in F_{}^{}, expected a {dim}-flat in F_{q}^{d}",
            f.dim(),
            f.q(),
            f.ambient_dim()
        ))),
        None => Ok(()),
    }
}

/// Number of pairs (p, H) in `small x large` with p contained in H.
///
/// Works on arbitrary families by testing containment pair by pair, with no
/// graph involved.
pub fn count_incidences(ctx: &FieldCtx, small: &[Flat], large: &[Flat]) -> Result<u64> {
    let (Some(p0), Some(h0)) = (small.first(), large.first()) else {
        return Ok(0);
    };
    let (q, d) = (ctx.order(), p0.ambient_dim());
    check_family(small, q, d, p0.dim(), "first family")?;
    check_family(large, q, d, h0.dim(), "second family")?;
    if p0.dim() > h0.dim() {
        return Err(Error::ParameterMismatch(format!(
            "{}-flats cannot lie in {}-flats",
            p0.dim(),
            h0.dim()
        )));
    }
    let mut total = 0;
    for h in large {
        for p in small {
            if h.contains_flat(ctx, p)? {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// Rank of the stacked system `[basis_1; basis_2; base_2 - base_1]`.
///
/// For distinct k-flats this lies in `k+1 ..= 2k+1` and equals the dimension
/// of the smallest flat containing both.
pub fn pair_rank(ctx: &FieldCtx, v1: &Flat, v2: &Flat) -> Result<usize> {
    if (v1.q(), v1.ambient_dim(), v1.dim()) != (v2.q(), v2.ambient_dim(), v2.dim()) || v1.q() != ctx.order() {
        return Err(Error::ParameterMismatch("pair rank needs two k-flats in the same space".into()));
    }
    if v1 == v2 {
        return Err(Error::IdenticalFlats);
    }
    Ok(stacked_rank(ctx, v1, v2))
}

/// Pair rank without validation; equals k when the flats coincide.
pub(crate) fn stacked_rank(ctx: &FieldCtx, v1: &Flat, v2: &Flat) -> usize {
    let (d, k) = (v1.ambient_dim(), v1.dim());
    let mut data = Vec::with_capacity((2 * k + 1) * d);
    data.extend_from_slice(v1.basis());
    data.extend_from_slice(v2.basis());
    data.extend(v2.base().iter().zip(v1.base()).map(|(&a, &b)| ctx.sub(a, b)));
    rref_in_place(ctx, &mut data, 2 * k + 1, d).len()
}

/// Number of h-flats containing both k-flats: `G(d - t, h - t, q)` for pair rank t,
/// zero when t > h.
pub fn common_neighbor_count(ctx: &FieldCtx, v1: &Flat, v2: &Flat, h: usize) -> Result<u64> {
    let t = pair_rank(ctx, v1, v2)?;
    let (d, k) = (v1.ambient_dim(), v1.dim());
    if !(k < h && h < d) {
        return Err(Error::InvalidParameters(format!("need k < h < d, got d={d} k={k} h={h}")));
    }
    if t > h {
        return Ok(0);
    }
    gaussian_binomial_u64((d - t) as u64, (h - t) as u64, u64::from(ctx.order()))
        .ok_or_else(|| Error::TooLarge("common neighbor count exceeds u64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::flats::enumerate_flats;
    use crate::incidence::{IncidenceGraph, Part};
    use crate::linalg::FqVector;

    fn v(x: &[u32]) -> FqVector {
        FqVector(x.to_vec())
    }

    fn line(ctx: &FieldCtx, dir: &[u32], base: &[u32]) -> Flat {
        Flat::from_span(ctx, &[v(dir)], &v(base)).unwrap()
    }

    #[test]
    fn pair_rank_examples() {
        let f3 = FieldCtx::new(3).unwrap();
        let l1 = line(&f3, &[1, 0], &[0, 0]);
        let l2 = line(&f3, &[1, 0], &[0, 1]);
        assert_eq!(pair_rank(&f3, &l1, &l2).unwrap(), 2);
        let l3 = line(&f3, &[1, 1], &[0, 0]);
        assert_eq!(pair_rank(&f3, &l1, &l3).unwrap(), 2);
        let s1 = line(&f3, &[1, 0, 0, 0], &[0, 0, 0, 0]);
        let s2 = line(&f3, &[0, 1, 0, 0], &[0, 0, 1, 0]);
        assert_eq!(pair_rank(&f3, &s1, &s2).unwrap(), 3);
        assert_eq!(pair_rank(&f3, &l1, &l1), Err(Error::IdenticalFlats));
        assert!(matches!(pair_rank(&f3, &l1, &s1), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn common_neighbors_match_adjacency() {
        let f3 = FieldCtx::new(3).unwrap();
        let g = IncidenceGraph::build(&f3, 4, 1, 3, &Budget::default()).unwrap();
        let idx = |f: &Flat| g.part_a().iter().position(|x| x == f).unwrap();
        let inter = |a: &Flat, b: &Flat| {
            let (na, nb) = (g.neighbors(Part::A, idx(a)), g.neighbors(Part::A, idx(b)));
            na.iter().filter(|x| nb.contains(x)).count() as u64
        };
        let c1 = line(&f3, &[1, 0, 0, 0], &[0, 0, 0, 0]);
        let c2 = line(&f3, &[0, 1, 0, 0], &[0, 0, 0, 0]);
        assert_eq!(common_neighbor_count(&f3, &c1, &c2, 3).unwrap(), 4);
        assert_eq!(inter(&c1, &c2), 4);
        let s2 = line(&f3, &[0, 1, 0, 0], &[0, 0, 1, 0]);
        assert_eq!(common_neighbor_count(&f3, &c1, &s2, 3).unwrap(), 1);
        assert_eq!(inter(&c1, &s2), 1);
        // t = 3 > h = 2
        assert_eq!(common_neighbor_count(&f3, &c1, &s2, 2).unwrap(), 0);
    }

    #[test]
    fn incidence_examples() {
        let f3 = FieldCtx::new(3).unwrap();
        let pts = enumerate_flats(&f3, 2, 0).unwrap();
        let lines = enumerate_flats(&f3, 2, 1).unwrap();
        assert_eq!(count_incidences(&f3, &pts, &lines).unwrap(), 36);
        assert_eq!(count_incidences(&f3, &[], &lines).unwrap(), 0);
        assert!(matches!(count_incidences(&f3, &lines, &pts), Err(Error::ParameterMismatch(_))));
        let mixed = vec![pts[0].clone(), lines[0].clone()];
        assert!(matches!(count_incidences(&f3, &mixed, &lines), Err(Error::ParameterMismatch(_))));
    }

    #[test]
    fn incidences_match_point_enumeration() {
        let f3 = FieldCtx::new(3).unwrap();
        let pts = enumerate_flats(&f3, 3, 0).unwrap();
        let planes = enumerate_flats(&f3, 3, 2).unwrap();
        let p_set: Vec<Flat> = pts.iter().step_by(2).cloned().collect();
        let h_set: Vec<Flat> = planes.iter().skip(1).step_by(3).cloned().collect();
        let oracle: usize = h_set
            .iter()
            .map(|pl| {
                pl.points(&f3)
                    .iter()
                    .filter(|x| p_set.iter().any(|p| p.base() == &x.0[..]))
                    .count()
            })
            .sum();
        assert_eq!(count_incidences(&f3, &p_set, &h_set).unwrap(), oracle as u64);
    }
}
