//! Exact integer calculus of monomial factors of automorphy on (C*)ⁿ.
//!
//! A line bundle given by Laurent-monomial monodromy factors is encoded as
//! an integer matrix: entry (a, b) is the exponent of coordinate b in the
//! factor acquired around coordinate loop a. Chern pairings against
//! coordinate 2-tori are then antisymmetrized exponents, and the extra-zero
//! criterion (solvable iff the normal bundle's first Chern class vanishes on
//! the support) becomes an integer test on user-declared support cycles.
//!
//! Support topology is declared, never computed: the tool decides the
//! criterion on the cycles it is given and qualifies every verdict as
//! "on tested cycles".

use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible |exponent|.
pub const MAX_EXPONENT: i64 = 1_000_000;

/// n×n integer matrix of monomial monodromy exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidDivisorSpec {
                reason: "exponent matrix must have positive dimension".into(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            for &e in row {
                if e.abs() > MAX_EXPONENT {
                    return Err(Error::ExponentOverflow {
                        value: e,
                        max: MAX_EXPONENT,
                    });
                }
                entries.push(e);
            }
        }
        Ok(ExponentMatrix { n, entries })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![vec![0; n]; n])
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Entry at 1-based (a, b).
    pub fn entry(&self, a: usize, b: usize) -> Result<i64> {
        if a < 1 || a > self.n || b < 1 || b > self.n {
            return Err(Error::LoopIndexOutOfRange { a, b, n: self.n });
        }
        Ok(self.entries[(a - 1) * self.n + (b - 1)])
    }

    /// Pairing of the first Chern class with the (a, b) coordinate torus:
    /// the antisymmetrized exponent `M[a][b] − M[b][a]`. Indices are 1-based.
    pub fn symbolic_pairing(&self, a: usize, b: usize) -> Result<i64> {
        Ok(self.entry(a, b)? - self.entry(b, a)?)
    }

    /// Entrywise sum (bundles of divisor sums multiply, exponents add).
    pub fn sum(&self, other: &ExponentMatrix) -> Result<ExponentMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (x, y) in self.entries.iter().zip(&other.entries) {
            let s = x.checked_add(*y).ok_or(Error::ExponentOverflow {
                value: i64::MAX,
                max: MAX_EXPONENT,
            })?;
            if s.abs() > MAX_EXPONENT {
                return Err(Error::ExponentOverflow {
                    value: s,
                    max: MAX_EXPONENT,
                });
            }
            entries.push(s);
        }
        Ok(ExponentMatrix { n: self.n, entries })
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 1..=self.n {
            for b in 1..=self.n {
                write!(
                    f,
                    "{}{}",
                    if b > 1 { " " } else { "" },
                    self.entry(a, b).unwrap()
                )?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sum the matrices of a list of divisor components.
pub fn sum_spec<'a>(specs: impl IntoIterator<Item = &'a ExponentMatrix>) -> Result<ExponentMatrix> {
    let mut iter = specs.into_iter();
    let first = iter.next().ok_or_else(|| Error::InvalidDivisorSpec {
        reason: "cannot sum an empty list of components".into(),
    })?;
    let mut acc = first.clone();
    for m in iter {
        acc = acc.sum(m)?;
    }
    Ok(acc)
}

/// A 2-cycle declared by the user to be realized inside the divisor support:
/// coefficient · (loop a ∧ loop b) with 1 ≤ a < b ≤ n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportCycleDecl {
    pub a: usize,
    pub b: usize,
    pub coefficient: i64,
}

impl SupportCycleDecl {
    pub fn new(a: usize, b: usize, coefficient: i64) -> Result<Self> {
        if a < 1 || a >= b {
            return Err(Error::InvalidDivisorSpec {
                reason: format!("support cycle needs 1 <= a < b, got ({a}, {b})"),
            });
        }
        if coefficient == 0 {
            return Err(Error::InvalidDivisorSpec {
                reason: "support cycle coefficient must be nonzero".into(),
            });
        }
        Ok(SupportCycleDecl { a, b, coefficient })
    }
}

/// A divisor as a formal sum of named monomial components, together with the
/// declared topology of its support.
#[derive(Debug, Clone)]
pub struct DivisorSpec {
    components: Vec<(String, ExponentMatrix)>,
    support_dim: usize,
    support_cycles: Vec<SupportCycleDecl>,
}

impl DivisorSpec {
    pub fn new(
        components: Vec<(String, ExponentMatrix)>,
        support_dim: usize,
        support_cycles: Vec<SupportCycleDecl>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDivisorSpec {
                reason: "divisor needs at least one component".into(),
            });
        }
        let n = components[0].1.dimension();
        for (name, m) in &components {
            if m.dimension() != n {
                return Err(Error::InvalidDivisorSpec {
                    reason: format!("component '{name}' has dimension {} != {n}", m.dimension()),
                });
            }
        }
        if support_dim < 1 {
            return Err(Error::InvalidDivisorSpec {
                reason: "support_dim must be >= 1".into(),
            });
        }
        if !support_cycles.is_empty() && support_dim < 2 {
            return Err(Error::InvalidDivisorSpec {
                reason: "a support of complex dimension < 2 cannot host declared 2-cycles".into(),
            });
        }
        for cyc in &support_cycles {
            if cyc.b > n {
                return Err(Error::LoopIndexOutOfRange {
                    a: cyc.a,
                    b: cyc.b,
                    n,
                });
            }
        }
        Ok(DivisorSpec {
            components,
            support_dim,
            support_cycles,
        })
    }

    pub fn dimension(&self) -> usize {
        self.components[0].1.dimension()
    }

    pub fn components(&self) -> &[(String, ExponentMatrix)] {
        &self.components
    }

    pub fn support_dim(&self) -> usize {
        self.support_dim
    }

    pub fn support_cycles(&self) -> &[SupportCycleDecl] {
        &self.support_cycles
    }

    /// The exponent matrix of the summed divisor.
    pub fn total_matrix(&self) -> Result<ExponentMatrix> {
        sum_spec(self.components.iter().map(|(_, m)| m))
    }
}

/// Which rule produced the extra-zero verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Curve support in a 2-dimensional ambient: always solvable.
    DimensionTwo,
    /// Pairings tested on the declared support cycles.
    CycleTest,
}

impl Rule {
    pub fn as_str(&self) -> &'static str {
        match self {
            Rule::DimensionTwo => "dimension-two",
            Rule::CycleTest => "cycle-test",
        }
    }
}

/// A Chern pairing against a coordinate 2-torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclePairing {
    pub a: usize,
    pub b: usize,
    pub pairing: i64,
}

/// A pairing against a declared support cycle (coefficient included).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupportPairing {
    pub a: usize,
    pub b: usize,
    pub coefficient: i64,
    pub pairing: i64,
}

/// The solvability verdict, qualified "on tested cycles" throughout.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub ambient_pairings: Vec<CyclePairing>,
    pub support_pairings: Vec<SupportPairing>,
    pub cousin2_on_tested: bool,
    pub extra_zero_on_tested: bool,
    pub rule_applied: Rule,
    /// A support cycle with nonzero pairing, when the extra-zero problem is
    /// obstructed on the tested cycles.
    pub witness: Option<SupportPairing>,
}

/// Decide the extra-zero criterion for a declared divisor: pair the summed
/// exponent matrix against every coordinate torus (ambient data) and against
/// each declared support cycle (the normal-bundle obstruction).
pub fn restrict_and_decide(spec: &DivisorSpec) -> Result<Verdict> {
    let n = spec.dimension();
    let total = spec.total_matrix()?;

    let mut ambient_pairings = Vec::new();
    for a in 1..=n {
        for b in (a + 1)..=n {
            ambient_pairings.push(CyclePairing {
                a,
                b,
                pairing: total.symbolic_pairing(a, b)?,
            });
        }
    }
    let cousin2_on_tested = ambient_pairings.iter().all(|p| p.pairing == 0);

    let rule_applied = if spec.support_dim() == 1 && n == 2 {
        Rule::DimensionTwo
    } else {
        Rule::CycleTest
    };

    let mut support_pairings = Vec::new();
    for cyc in spec.support_cycles() {
        let p = total.symbolic_pairing(cyc.a, cyc.b)?;
        support_pairings.push(SupportPairing {
            a: cyc.a,
            b: cyc.b,
            coefficient: cyc.coefficient,
            pairing: cyc.coefficient * p,
        });
    }

    let extra_zero_on_tested = match rule_applied {
        Rule::DimensionTwo => true,
        Rule::CycleTest => support_pairings.iter().all(|p| p.pairing == 0),
    };
    let witness = if extra_zero_on_tested {
        None
    } else {
        support_pairings.iter().copied().find(|p| p.pairing != 0)
    };

    Ok(Verdict {
        ambient_pairings,
        support_pairings,
        cousin2_on_tested,
        extra_zero_on_tested,
        rule_applied,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dplus() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![0, 1], vec![0, 0]]).unwrap()
    }

    fn dminus() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![0, -1], vec![0, 0]]).unwrap()
    }

    #[test]
    fn pairing_of_dplus_is_one() {
        assert_eq!(dplus().symbolic_pairing(1, 2).unwrap(), 1);
        assert_eq!(dplus().symbolic_pairing(2, 1).unwrap(), -1);
    }

    #[test]
    fn pairing_of_zero_matrix_is_zero() {
        let z = ExponentMatrix::zeros(3).unwrap();
        assert_eq!(z.symbolic_pairing(1, 2).unwrap(), 0);
        assert_eq!(z.symbolic_pairing(2, 3).unwrap(), 0);
    }

    #[test]
    fn pairing_of_dminus_is_minus_one() {
        assert_eq!(dminus().symbolic_pairing(1, 2).unwrap(), -1);
    }

    #[test]
    fn index_out_of_range_is_rejected() {
        assert!(matches!(
            dplus().symbolic_pairing(0, 2),
            Err(Error::LoopIndexOutOfRange { .. })
        ));
        assert!(matches!(
            dplus().symbolic_pairing(1, 3),
            Err(Error::LoopIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn sums_cancel_and_project() {
        let s = dplus().sum(&dminus()).unwrap();
        assert_eq!(s, ExponentMatrix::zeros(2).unwrap());

        // D1 = pullback of D+ to (C*)^3, D2 = {t = 1} with trivial bundle.
        let d1 = ExponentMatrix::new(vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        let d2 = ExponentMatrix::zeros(3).unwrap();
        assert_eq!(d1.sum(&d2).unwrap(), d1);

        let m = ExponentMatrix::new(vec![vec![2, -3], vec![5, 7]]).unwrap();
        let neg = ExponentMatrix::new(vec![vec![-2, 3], vec![-5, -7]]).unwrap();
        assert_eq!(m.sum(&neg).unwrap(), ExponentMatrix::zeros(2).unwrap());
    }

    #[test]
    fn sum_rejects_dimension_mismatch() {
        let a = ExponentMatrix::zeros(2).unwrap();
        let b = ExponentMatrix::zeros(3).unwrap();
        assert!(matches!(a.sum(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dplus_verdict_extra_zero_possible_cousin2_obstructed() {
        // Curve support (the image of ζ ↦ (e^ζ, e^{iζ})) in ambient
        // dimension 2: the dimension-two rule applies.
        let spec = DivisorSpec::new(vec![("Dplus".into(), dplus())], 1, vec![]).unwrap();
        let v = restrict_and_decide(&spec).unwrap();
        assert_eq!(v.rule_applied, Rule::DimensionTwo);
        assert!(v.extra_zero_on_tested);
        assert!(!v.cousin2_on_tested);
        assert_eq!(
            v.ambient_pairings,
            vec![CyclePairing {
                a: 1,
                b: 2,
                pairing: 1
            }]
        );
        assert!(v.witness.is_none());
    }

    #[test]
    fn reducible_divisor_is_obstructed_with_witness() {
        let d1 = ExponentMatrix::new(vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 0]]).unwrap();
        let d2 = ExponentMatrix::zeros(3).unwrap();
        let spec = DivisorSpec::new(
            vec![("D1".into(), d1), ("D2".into(), d2)],
            2,
            vec![SupportCycleDecl::new(1, 2, 1).unwrap()],
        )
        .unwrap();
        let v = restrict_and_decide(&spec).unwrap();
        assert_eq!(v.rule_applied, Rule::CycleTest);
        assert!(!v.extra_zero_on_tested);
        let w = v.witness.expect("obstruction must carry a witness");
        assert_eq!((w.a, w.b, w.pairing), (1, 2, 1));
    }

    #[test]
    fn cancelling_components_give_trivial_bundle() {
        let spec = DivisorSpec::new(
            vec![("Dplus".into(), dplus()), ("Dminus".into(), dminus())],
            1,
            vec![],
        )
        .unwrap();
        let v = restrict_and_decide(&spec).unwrap();
        assert!(v.cousin2_on_tested);
        assert!(v.extra_zero_on_tested);
    }

    #[test]
    fn support_cycles_need_a_surface() {
        let r = DivisorSpec::new(
            vec![("Dplus".into(), dplus())],
            1,
            vec![SupportCycleDecl::new(1, 2, 1).unwrap()],
        );
        assert!(matches!(r, Err(Error::InvalidDivisorSpec { .. })));
    }
}
