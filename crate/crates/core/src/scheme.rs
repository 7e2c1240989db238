//! Operator-splitting coefficient sets.
//!
//! A scheme is an ordered list of stage pairs `(c_i, d_i)`. One step applies,
//! right to left,
//!
//! ```text
//! U_V(c_1 dt) U_K(d_1 dt) ... U_V(c_s dt) U_K(d_s dt)
//! ```
//!
//! so the first operator to act on the state is the kinetic factor
//! `U_K(d_s dt)` and the last is the potential factor `U_V(c_1 dt)`. Stages
//! with an exactly-zero coefficient are dropped by the propagator.

use crate::error::{Error, Result};

/// One of the shipped coefficient sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinScheme {
    /// First-order Lie splitting, `c = (1)`, `d = (1)`.
    Lie,
    /// Strang in V-K-V form, `c = (1/2, 1/2)`, `d = (1, 0)`.
    StrangVkv,
    /// Strang in K-V-K form, `c = (0, 1)`, `d = (1/2, 1/2)`.
    StrangKvk,
    /// Non-symmetric three-stage third-order set (coefficients as printed,
    /// 4-5 significant digits).
    Triple3,
    /// Yoshida's fourth-order composition.
    Yoshida4,
}

impl BuiltinScheme {
    pub const ALL: [BuiltinScheme; 5] = [
        BuiltinScheme::Lie,
        BuiltinScheme::StrangVkv,
        BuiltinScheme::StrangKvk,
        BuiltinScheme::Triple3,
        BuiltinScheme::Yoshida4,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            BuiltinScheme::Lie => "lie",
            BuiltinScheme::StrangVkv => "strang_vkv",
            BuiltinScheme::StrangKvk => "strang_kvk",
            BuiltinScheme::Triple3 => "triple3",
            BuiltinScheme::Yoshida4 => "yoshida4",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::UnknownScheme(id.to_string()))
    }
}

/// Splitting coefficients `(c_i, d_i)` with a declared formal order.
#[derive(Debug, Clone, PartialEq)]
pub struct SplittingScheme {
    name: String,
    c: Vec<f64>,
    d: Vec<f64>,
    order: u32,
    symmetric: bool,
}

/// Outcome of the order-condition checks; carries failures instead of
/// erroring so callers can report them.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub sum_c: f64,
    pub sum_d: f64,
    /// First-order conditions `sum c = sum d = 1` hold to the tolerance used
    /// for the scheme (1e-12, or 5e-5 for printed 4-5 digit coefficients).
    pub consistent: bool,
    /// Value of `sum_i d_i * (c_1 + ... + c_i)`; equals 1/2 for second order.
    pub order2_lhs: f64,
    pub order2_ok: bool,
    /// The applied operator sequence reads the same in both directions.
    pub palindromic: bool,
}

impl SplittingScheme {
    /// Build a custom scheme; checks stage counts and consistency.
    pub fn custom(name: impl Into<String>, c: Vec<f64>, d: Vec<f64>, order: u32) -> Result<Self> {
        let name = name.into();
        if c.is_empty() || c.len() != d.len() {
            return Err(Error::InvalidScheme(format!(
                "need equal, nonzero stage counts; got {} c's and {} d's",
                c.len(),
                d.len()
            )));
        }
        if order < 1 {
            return Err(Error::InvalidScheme("declared order must be >= 1".into()));
        }
        let scheme = Self {
            name,
            c,
            d,
            order,
            symmetric: false,
        };
        let report = scheme.validate_with_tolerance(1e-12);
        if !report.consistent {
            return Err(Error::InvalidScheme(format!(
                "consistency failure: sum c = {}, sum d = {}",
                report.sum_c, report.sum_d
            )));
        }
        let symmetric = report.palindromic;
        Ok(Self { symmetric, ..scheme })
    }

    pub fn builtin(which: BuiltinScheme) -> Self {
        match which {
            BuiltinScheme::Lie => Self {
                name: "lie".into(),
                c: vec![1.0],
                d: vec![1.0],
                order: 1,
                symmetric: false,
            },
            BuiltinScheme::StrangVkv => Self {
                name: "strang_vkv".into(),
                c: vec![0.5, 0.5],
                d: vec![1.0, 0.0],
                order: 2,
                symmetric: true,
            },
            BuiltinScheme::StrangKvk => Self {
                name: "strang_kvk".into(),
                c: vec![0.0, 1.0],
                d: vec![0.5, 0.5],
                order: 2,
                symmetric: true,
            },
            BuiltinScheme::Triple3 => {
                let c1 = 0.26833;
                let c2 = 0.9197;
                let d1 = 0.63506;
                let d2 = -0.1880;
                Self {
                    name: "triple3".into(),
                    c: vec![c1, c2, 1.0 - c1 - c2],
                    d: vec![d1, d2, 1.0 - d1 - d2],
                    order: 3,
                    symmetric: false,
                }
            }
            BuiltinScheme::Yoshida4 => {
                let cbrt2 = 2.0_f64.cbrt();
                let d1 = 1.0 / (2.0 - cbrt2);
                let c1 = 0.5 * d1;
                Self {
                    name: "yoshida4".into(),
                    c: vec![c1, 0.5 - c1, 0.5 - c1, c1],
                    // d2 is fixed by sum d = 1: d2 = 1 - 2 d1.
                    d: vec![d1, 1.0 - 2.0 * d1, d1, 0.0],
                    order: 4,
                    symmetric: true,
                }
            }
        }
    }

    pub fn by_id(id: &str) -> Result<Self> {
        BuiltinScheme::from_id(id).map(Self::builtin)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of stages `s`.
    pub fn stages(&self) -> usize {
        self.c.len()
    }

    /// Potential-phase coefficients `c_i`.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// Kinetic-phase coefficients `d_i`.
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Declared formal order `p`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// The applied operator sequence, first-applied first, zero-coefficient
    /// stages dropped: `[K(d_s), V(c_s), ..., K(d_1), V(c_1)]`.
    pub fn applied_sequence(&self) -> Vec<(StageKind, f64)> {
        let mut seq = Vec::with_capacity(2 * self.stages());
        for i in (0..self.stages()).rev() {
            if self.d[i] != 0.0 {
                seq.push((StageKind::Kinetic, self.d[i]));
            }
            if self.c[i] != 0.0 {
                seq.push((StageKind::Potential, self.c[i]));
            }
        }
        seq
    }

    pub fn validate(&self) -> ValidationReport {
        // Printed coefficient sets carry 4-5 significant digits, so the
        // consistency tolerance is relaxed accordingly.
        let tol = if self.name == "triple3" { 5e-5 } else { 1e-12 };
        self.validate_with_tolerance(tol)
    }

    fn validate_with_tolerance(&self, tol: f64) -> ValidationReport {
        let sum_c: f64 = self.c.iter().sum();
        let sum_d: f64 = self.d.iter().sum();
        let consistent = (sum_c - 1.0).abs() <= tol && (sum_d - 1.0).abs() <= tol;
        let mut prefix = 0.0;
        let mut order2_lhs = 0.0;
        for (&ci, &di) in self.c.iter().zip(&self.d) {
            prefix += ci;
            order2_lhs += di * prefix;
        }
        let order2_ok = (order2_lhs - 0.5).abs() <= tol.max(1e-12);
        let seq = self.applied_sequence();
        let palindromic = seq.iter().zip(seq.iter().rev()).all(|(a, b)| {
            a.0 == b.0 && (a.1 - b.1).abs() <= 1e-12
        });
        ValidationReport {
            sum_c,
            sum_d,
            consistent,
            order2_lhs,
            order2_ok,
            palindromic,
        }
    }
}

/// Which diagonal factor a stage applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageKind {
    Kinetic,
    Potential,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_ids_round_trip() {
        for b in BuiltinScheme::ALL {
            assert_eq!(BuiltinScheme::from_id(b.id()).unwrap(), b);
        }
        assert!(matches!(
            BuiltinScheme::from_id("ruth"),
            Err(Error::UnknownScheme(_))
        ));
    }

    #[test]
    fn strang_sums_are_exact() {
        for id in ["strang_vkv", "strang_kvk"] {
            let s = SplittingScheme::by_id(id).unwrap();
            assert_eq!(s.c().iter().sum::<f64>(), 1.0);
            assert_eq!(s.d().iter().sum::<f64>(), 1.0);
            assert!(s.is_symmetric());
        }
    }

    #[test]
    fn triple3_third_coefficient() {
        let s = SplittingScheme::by_id("triple3").unwrap();
        assert!((s.c()[2] - (-0.18803)).abs() < 1e-12);
        assert!((s.d()[2] - 0.55294).abs() < 1e-12);
        assert!(!s.is_symmetric());
    }

    #[test]
    fn yoshida4_derived_coefficients() {
        let s = SplittingScheme::by_id("yoshida4").unwrap();
        assert!((s.d()[0] - 1.351207191959658).abs() < 1e-14);
        assert!((s.d()[1] - (-1.702414383919315)).abs() < 1e-14);
        assert_eq!(s.d()[3], 0.0);
        // 2 c1 + 2 c2 = 1 and 2 d1 + d2 = 1 by construction
        assert!((2.0 * s.c()[0] + 2.0 * s.c()[1] - 1.0).abs() < 1e-15);
        assert!((2.0 * s.d()[0] + s.d()[1] - 1.0).abs() < 1e-15);
        assert!(s.is_symmetric());
    }

    #[test]
    fn every_builtin_is_consistent() {
        for b in BuiltinScheme::ALL {
            let s = SplittingScheme::builtin(b);
            let r = s.validate();
            assert!(r.consistent, "{} failed consistency: {r:?}", s.name());
            assert!(s.stages() >= 1);
            assert!(s.order() >= 1);
        }
    }

    #[test]
    fn order2_condition_discriminates() {
        let strang = SplittingScheme::by_id("strang_vkv").unwrap().validate();
        assert!(strang.order2_ok);
        assert!((strang.order2_lhs - 0.5).abs() < 1e-15);
        let kvk = SplittingScheme::by_id("strang_kvk").unwrap().validate();
        assert!(kvk.order2_ok);
        let lie = SplittingScheme::by_id("lie").unwrap().validate();
        assert!(!lie.order2_ok);
        let yoshida = SplittingScheme::by_id("yoshida4").unwrap().validate();
        assert!(yoshida.order2_ok);
        let triple = SplittingScheme::by_id("triple3").unwrap().validate();
        assert!(triple.order2_ok, "triple3 order-2 lhs {}", triple.order2_lhs);
    }

    #[test]
    fn inconsistent_custom_scheme_is_flagged() {
        let err = SplittingScheme::custom("bad", vec![0.5, 0.4], vec![0.5, 0.5], 1);
        assert!(matches!(err, Err(Error::InvalidScheme(_))));
        // validate() itself reports rather than errors
        let s = SplittingScheme {
            name: "bad".into(),
            c: vec![0.5, 0.4],
            d: vec![0.5, 0.5],
            order: 1,
            symmetric: false,
        };
        assert!(!s.validate().consistent);
    }

    #[test]
    fn applied_sequence_order_and_zero_skip() {
        let s = SplittingScheme::by_id("strang_vkv").unwrap();
        let seq = s.applied_sequence();
        assert_eq!(
            seq,
            vec![
                (StageKind::Potential, 0.5),
                (StageKind::Kinetic, 1.0),
                (StageKind::Potential, 0.5),
            ]
        );
        let kvk = SplittingScheme::by_id("strang_kvk").unwrap().applied_sequence();
        assert_eq!(
            kvk,
            vec![
                (StageKind::Kinetic, 0.5),
                (StageKind::Potential, 1.0),
                (StageKind::Kinetic, 0.5),
            ]
        );
        let lie = SplittingScheme::by_id("lie").unwrap().applied_sequence();
        assert_eq!(
            lie,
            vec![(StageKind::Kinetic, 1.0), (StageKind::Potential, 1.0)]
        );
    }

    #[test]
    fn custom_scheme_detects_symmetry() {
        let s = SplittingScheme::custom(
            "strang-copy",
            vec![0.5, 0.5],
            vec![1.0, 0.0],
            2,
        )
        .unwrap();
        assert!(s.is_symmetric());
    }
}
