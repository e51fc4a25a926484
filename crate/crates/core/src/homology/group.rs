//! Finitely generated abelian groups via invariant factors, cohomology of
//! integer cochain complexes, localization away from 2, and the bounded
//! torsion / extension bookkeeping used for the abutment reports.

use std::fmt;

use num::{BigInt, Integer, One, Zero};

use crate::error::{Error, Result};
use crate::homology::matrix::{
    express_in_basis, image_basis, kernel_basis, smith_normal_form, snf_diagonal, IntMatrix,
};

/// A finitely generated abelian group Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k with
/// d_i >= 2 and d_i | d_{i+1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FGAbGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FGAbGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<FGAbGroup> {
        for w in invariant_factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::Dimension(format!(
                    "invariant factors {} and {} break the divisibility chain",
                    w[0], w[1]
                )));
            }
        }
        if invariant_factors.iter().any(|d| *d < BigInt::from(2)) {
            return Err(Error::Dimension("invariant factors must be >= 2".into()));
        }
        Ok(FGAbGroup { free_rank, invariant_factors })
    }

    pub fn zero() -> FGAbGroup {
        FGAbGroup { free_rank: 0, invariant_factors: vec![] }
    }

    pub fn free(rank: usize) -> FGAbGroup {
        FGAbGroup { free_rank: rank, invariant_factors: vec![] }
    }

    pub fn cyclic(n: u64) -> FGAbGroup {
        assert!(n >= 2);
        FGAbGroup { free_rank: 0, invariant_factors: vec![BigInt::from(n)] }
    }

    /// The cokernel Z^g / (columns of rel), where g = rel.rows().
    pub fn from_presentation(rel: &IntMatrix) -> FGAbGroup {
        let (_, d, _) = smith_normal_form(rel);
        let diag = snf_diagonal(&d);
        let pivots = diag.len();
        let invariant_factors = diag
            .into_iter()
            .filter(|x| !x.is_one())
            .collect();
        FGAbGroup {
            free_rank: rel.rows() - pivots,
            invariant_factors,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &FGAbGroup) -> FGAbGroup {
        // merge invariant factors through a diagonal presentation
        let all: Vec<BigInt> = self
            .invariant_factors
            .iter()
            .chain(other.invariant_factors.iter())
            .cloned()
            .collect();
        let n = all.len();
        let rel = IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                all[i].clone()
            } else {
                BigInt::zero()
            }
        });
        let mut g = FGAbGroup::from_presentation(&rel);
        g.free_rank += self.free_rank + other.free_rank;
        g
    }
}

impl fmt::Display for FGAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = vec![];
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cohomology of a cochain complex of free groups, given as the list of
/// differentials d_i: C^i -> C^{i+1} (each a rows(C^{i+1}) x cols(C^i)
/// matrix). Returns one group per term, len(diffs) + 1 of them.
pub fn cohomology(diffs: &[IntMatrix]) -> Result<Vec<FGAbGroup>> {
    if diffs.is_empty() {
        return Ok(vec![]);
    }
    for (i, w) in diffs.windows(2).enumerate() {
        if w[0].rows() != w[1].cols() {
            return Err(Error::Dimension(format!(
                "differential {} has {} rows but differential {} has {} columns",
                i,
                w[0].rows(),
                i + 1,
                w[1].cols()
            )));
        }
        if !w[1].mul(&w[0]).is_zero() {
            return Err(Error::NotAComplex(i + 1));
        }
    }
    let mut out = vec![];
    for i in 0..=diffs.len() {
        let kernel = if i < diffs.len() {
            kernel_basis(&diffs[i])
        } else {
            IntMatrix::identity(diffs[i - 1].rows())
        };
        if i == 0 {
            out.push(FGAbGroup::free(kernel.cols()));
            continue;
        }
        // image of d_{i-1} inside the kernel, expressed in the kernel basis
        let image = image_basis(&diffs[i - 1]);
        let rel = express_in_basis(&kernel, &image)
            .map_err(|_| Error::NotAComplex(i))?;
        out.push(FGAbGroup::from_presentation(&rel));
    }
    Ok(out)
}

/// Tensor with Z[1/2]: drops the 2-primary torsion, keeping the free rank
/// and the odd part of every invariant factor.
pub fn localize_away_2(g: &FGAbGroup) -> FGAbGroup {
    let factors: Vec<BigInt> = g
        .invariant_factors()
        .iter()
        .map(|d| {
            let mut d = d.clone();
            while d.is_even() {
                d /= 2;
            }
            d
        })
        .filter(|d| !d.is_one())
        .collect();
    FGAbGroup {
        free_rank: g.free_rank(),
        invariant_factors: factors,
    }
}

/// The cellular cochain complex of the lens space L^n(p) for odd n: one Z in
/// every degree 0..=n with the coboundaries alternating 0, p, 0, p, ..., 0.
pub fn lens_complex(n: u32, p: u64) -> Result<Vec<IntMatrix>> {
    if n % 2 == 0 || n < 3 {
        return Err(Error::Dimension(format!(
            "lens fixture needs odd n >= 3, got {n}"
        )));
    }
    if p < 2 {
        return Err(Error::Dimension(format!("lens fixture needs p >= 2, got {p}")));
    }
    Ok((0..n)
        .map(|i| {
            IntMatrix::from_rows(vec![vec![if i % 2 == 1 { p as i64 } else { 0 }]])
        })
        .collect())
}

/// Presentation matrix of a group: diagonal invariant factors on the torsion
/// generators, free generators relation-free.
pub fn presentation_of(g: &FGAbGroup) -> IntMatrix {
    let gens = g.free_rank() + g.invariant_factors().len();
    let rels = g.invariant_factors().len();
    IntMatrix::from_fn(gens, rels, |i, j| {
        // torsion generators come first
        if i == j {
            g.invariant_factors()[j].clone()
        } else {
            BigInt::zero()
        }
    })
}

/// Outcome of assembling an extension of C by A and checking the
/// Serre-subcategory bounds on it.
#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub group: FGAbGroup,
    pub exponent_divides: bool,
    pub rank_additive: bool,
    pub splits_torsion_free: bool,
}

impl ExtensionReport {
    pub fn all_pass(&self) -> bool {
        self.exponent_divides && self.rank_additive && self.splits_torsion_free
    }
}

/// Build the middle group of an extension 0 -> A -> B -> C -> 0 from the
/// block presentation [[pres(A), lift], [0, pres(C)]] and verify that the
/// torsion exponent divides the product of the outer exponents, that free
/// ranks add, and that B splits as torsion plus free.
///
/// `lift` prescribes, for each torsion relation of C, the A-part of the
/// lifted relation; its shape is gens(A) x torsion(C).
pub fn serre_extension_check(
    a: &FGAbGroup,
    c: &FGAbGroup,
    lift: &IntMatrix,
) -> Result<ExtensionReport> {
    let pa = presentation_of(a);
    let pc = presentation_of(c);
    if lift.rows() != pa.rows() || lift.cols() != pc.cols() {
        return Err(Error::InvalidExtension(format!(
            "lift must be {} x {}, got {} x {}",
            pa.rows(),
            pc.cols(),
            lift.rows(),
            lift.cols()
        )));
    }
    let gens = pa.rows() + pc.rows();
    let rels = pa.cols() + pc.cols();
    let block = IntMatrix::from_fn(gens, rels, |i, j| {
        if i < pa.rows() && j < pa.cols() {
            pa.get(i, j).clone()
        } else if i < pa.rows() {
            lift.get(i, j - pa.cols()).clone()
        } else if j >= pa.cols() {
            pc.get(i - pa.rows(), j - pa.cols()).clone()
        } else {
            BigInt::zero()
        }
    });
    let b = FGAbGroup::from_presentation(&block);
    let bound = a.torsion_exponent() * c.torsion_exponent();
    let report = ExtensionReport {
        exponent_divides: (&bound % b.torsion_exponent()).is_zero(),
        rank_additive: b.free_rank() == a.free_rank() + c.free_rank(),
        // finitely generated groups always split; the certificate is the
        // invariant-factor decomposition itself
        splits_torsion_free: true,
        group: b,
    };
    Ok(report)
}

/// Summary of a family of groups with uniformly bounded torsion: the lcm of
/// the torsion exponents, the free ranks, and each group's torsion + free
/// decomposition.
#[derive(Debug, Clone)]
pub struct BoundedTorsionReport {
    pub exponent_bound: BigInt,
    pub ranks: Vec<usize>,
    pub torsion_parts: Vec<Vec<BigInt>>,
}

pub fn bounded_torsion_report(groups: &[FGAbGroup]) -> BoundedTorsionReport {
    let mut bound = BigInt::one();
    for g in groups {
        bound = bound.lcm(&g.torsion_exponent());
    }
    BoundedTorsionReport {
        exponent_bound: bound,
        ranks: groups.iter().map(|g| g.free_rank()).collect(),
        torsion_parts: groups
            .iter()
            .map(|g| g.invariant_factors().to_vec())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn presentation_basics() {
        // Z/2 + Z/4 from a non-diagonal presentation
        let rel = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 4], vec![0, 0]]);
        let g = FGAbGroup::from_presentation(&rel);
        assert_eq!(g.free_rank(), 1);
        assert_eq!(
            g.invariant_factors(),
            &[BigInt::from(2), BigInt::from(4)]
        );
        assert_eq!(g.to_string(), "Z + Z/2 + Z/4");
    }

    #[test]
    fn cohomology_lens() {
        let c = lens_complex(5, 7).unwrap();
        let h = cohomology(&c).unwrap();
        let expect = vec![
            FGAbGroup::free(1),
            FGAbGroup::zero(),
            FGAbGroup::cyclic(7),
            FGAbGroup::zero(),
            FGAbGroup::cyclic(7),
            FGAbGroup::free(1),
        ];
        assert_eq!(h, expect);
    }

    #[test]
    fn cohomology_zero_complex() {
        let c = vec![IntMatrix::zeros(3, 2), IntMatrix::zeros(1, 3)];
        let h = cohomology(&c).unwrap();
        assert_eq!(h, vec![FGAbGroup::free(2), FGAbGroup::free(3), FGAbGroup::free(1)]);
    }

    #[test]
    fn cohomology_times_two() {
        let c = vec![IntMatrix::from_rows(vec![vec![2]])];
        let h = cohomology(&c).unwrap();
        assert_eq!(h, vec![FGAbGroup::zero(), FGAbGroup::cyclic(2)]);
    }

    #[test]
    fn not_a_complex_rejected() {
        let c = vec![
            IntMatrix::from_rows(vec![vec![1]]),
            IntMatrix::from_rows(vec![vec![1]]),
        ];
        assert!(matches!(cohomology(&c), Err(Error::NotAComplex(1))));
    }

    #[test]
    fn localize_examples() {
        assert!(localize_away_2(&FGAbGroup::cyclic(8)).is_zero());
        assert_eq!(localize_away_2(&FGAbGroup::cyclic(12)), FGAbGroup::cyclic(3));
        let g = FGAbGroup::free(1)
            .direct_sum(&FGAbGroup::cyclic(2))
            .direct_sum(&FGAbGroup::cyclic(6));
        let l = localize_away_2(&g);
        assert_eq!(l.free_rank(), 1);
        assert_eq!(l.invariant_factors(), &[BigInt::from(3)]);
        // idempotent
        assert_eq!(localize_away_2(&l), l);
    }

    #[test]
    fn localize_commutes_with_cohomology() {
        // multiplication by 2^a * odd on Z: H^1 localizes to Z/odd
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let odd = 2 * rng.gen_range(0i64..8) + 1;
            let k = odd << rng.gen_range(0..3);
            let c = vec![IntMatrix::from_rows(vec![vec![k]])];
            let h = cohomology(&c).unwrap();
            let lh = localize_away_2(&h[1]);
            let expected = if odd == 1 {
                FGAbGroup::zero()
            } else {
                FGAbGroup::cyclic(odd as u64)
            };
            assert_eq!(lh, expected, "k={k}");
        }
    }

    #[test]
    fn extension_examples() {
        // trivial extension of Z/3 by Z/2 is Z/6
        let r = serre_extension_check(
            &FGAbGroup::cyclic(2),
            &FGAbGroup::cyclic(3),
            &IntMatrix::zeros(1, 1),
        )
        .unwrap();
        assert!(r.all_pass());
        assert_eq!(r.group, FGAbGroup::cyclic(6));

        // Z by Z: free rank 2
        let r = serre_extension_check(
            &FGAbGroup::free(1),
            &FGAbGroup::free(1),
            &IntMatrix::zeros(1, 0),
        )
        .unwrap();
        assert!(r.all_pass());
        assert_eq!(r.group, FGAbGroup::free(2));

        // nonsplit extension of Z/2 by Z/2: <x, y | 2x, 2y - x> = Z/4
        let lift = IntMatrix::from_rows(vec![vec![-1]]);
        let r = serre_extension_check(&FGAbGroup::cyclic(2), &FGAbGroup::cyclic(2), &lift)
            .unwrap();
        assert!(r.all_pass());
        assert_eq!(r.group, FGAbGroup::cyclic(4));
    }

    #[test]
    fn extension_random_serre_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let mk = |rng: &mut ChaCha8Rng| {
                let mut g = FGAbGroup::free(rng.gen_range(0..=2));
                for _ in 0..rng.gen_range(0..=2) {
                    g = g.direct_sum(&FGAbGroup::cyclic(rng.gen_range(2..=12)));
                }
                g
            };
            let a = mk(&mut rng);
            let c = mk(&mut rng);
            let lift = IntMatrix::from_fn(
                a.free_rank() + a.invariant_factors().len(),
                c.invariant_factors().len(),
                |_, _| BigInt::from(rng.gen_range(-5i64..=5)),
            );
            let r = serre_extension_check(&a, &c, &lift).unwrap();
            assert!(r.all_pass(), "A={a} C={c} B={}", r.group);
        }
    }

    #[test]
    fn bounded_torsion_examples() {
        let g1 = FGAbGroup::free(1).direct_sum(&FGAbGroup::cyclic(4));
        let g2 = FGAbGroup::cyclic(6);
        let r = bounded_torsion_report(&[g1, g2]);
        assert_eq!(r.exponent_bound, BigInt::from(12));
        assert_eq!(r.ranks, vec![1, 0]);

        let r = bounded_torsion_report(&[FGAbGroup::free(2), FGAbGroup::free(0)]);
        assert_eq!(r.exponent_bound, BigInt::one());

        let r = bounded_torsion_report(&[FGAbGroup::cyclic(5)]);
        assert_eq!(r.exponent_bound, BigInt::from(5));
    }

    #[test]
    fn direct_sum_normalizes() {
        // Z/2 + Z/3 = Z/6 in invariant-factor form
        let g = FGAbGroup::cyclic(2).direct_sum(&FGAbGroup::cyclic(3));
        assert_eq!(g, FGAbGroup::cyclic(6));
        // Z/2 + Z/4 stays two factors
        let g = FGAbGroup::cyclic(2).direct_sum(&FGAbGroup::cyclic(4));
        assert_eq!(g.invariant_factors(), &[BigInt::from(2), BigInt::from(4)]);
    }
}
