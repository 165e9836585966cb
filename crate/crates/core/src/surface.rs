//! Picard lattices of smooth projective surfaces and the intersection
//! criterion for complements of curves: pairings of a divisor `H` supported
//! on `Y` with the components of `Y` and with a list of test curves, the
//! self-intersection of `Y`, and connectivity of `Y`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Free abelian group of divisor classes with a symmetric integral form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardLattice {
    pub name: String,
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

impl PicardLattice {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let r = matrix.len();
        if labels.len() != r {
            return Err(Error::Lattice(format!(
                "`{name}`: {} labels for rank {r}",
                labels.len()
            )));
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != r {
                return Err(Error::Lattice(format!(
                    "`{name}`: row {} has length {}, expected {r}",
                    i + 1,
                    row.len()
                )));
            }
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::Lattice(format!(
                        "`{name}`: intersection matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Lattice(format!("`{name}`: duplicate label {l}")));
            }
        }
        Ok(Arc::new(PicardLattice {
            name,
            labels,
            matrix,
        }))
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// The plane blown up in `n` points: basis `H, E1..En`, form
/// `diag(1, -1, ..., -1)`.
pub fn blowup_lattice(name: impl Into<String>, n: usize) -> Arc<PicardLattice> {
    let mut labels = vec!["H".to_string()];
    labels.extend((1..=n).map(|i| format!("E{i}")));
    let matrix = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| match (i == j, i) {
                    (false, _) => 0,
                    (true, 0) => 1,
                    (true, _) => -1,
                })
                .collect()
        })
        .collect();
    PicardLattice::new(name, labels, matrix).expect("diagonal form is valid")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivClass {
    lattice: Arc<PicardLattice>,
    coeffs: Vec<i64>,
}

impl DivClass {
    pub fn new(lattice: &Arc<PicardLattice>, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != lattice.rank() {
            return Err(Error::Lattice(format!(
                "class has {} coefficients, lattice `{}` has rank {}",
                coeffs.len(),
                lattice.name,
                lattice.rank()
            )));
        }
        Ok(DivClass {
            lattice: lattice.clone(),
            coeffs,
        })
    }

    pub fn zero(lattice: &Arc<PicardLattice>) -> Self {
        DivClass {
            lattice: lattice.clone(),
            coeffs: vec![0; lattice.rank()],
        }
    }

    pub fn basis(lattice: &Arc<PicardLattice>, i: usize) -> Self {
        let mut c = Self::zero(lattice);
        c.coeffs[i] = 1;
        c
    }

    /// `d H - sum m_i E_i` on a blow-up lattice.
    pub fn proper_transform(lattice: &Arc<PicardLattice>, d: i64, mults: &[i64]) -> Result<Self> {
        let mut coeffs = vec![d];
        coeffs.extend(mults.iter().map(|m| -m));
        coeffs.resize(lattice.rank(), 0);
        Self::new(lattice, coeffs)
    }

    pub fn lattice(&self) -> &Arc<PicardLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, other: &DivClass) -> Result<DivClass> {
        self.check_lattice(other)?;
        Ok(DivClass {
            lattice: self.lattice.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: i64) -> DivClass {
        DivClass {
            lattice: self.lattice.clone(),
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    fn check_lattice(&self, other: &DivClass) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice {
            Ok(())
        } else {
            Err(Error::Lattice(format!(
                "classes live on different lattices `{}` and `{}`",
                self.lattice.name, other.lattice.name
            )))
        }
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, l) in self.coeffs.iter().zip(self.lattice.labels()) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            match (first, *c < 0) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, _) => write!(f, " {sign} ")?,
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `c1^T M c2`.
pub fn intersection(c1: &DivClass, c2: &DivClass) -> Result<i64> {
    c1.check_lattice(c2)?;
    let m = c1.lattice.matrix();
    let mut total = 0i64;
    for (i, a) in c1.coeffs.iter().enumerate() {
        if *a == 0 {
            continue;
        }
        for (j, b) in c2.coeffs.iter().enumerate() {
            total += a * m[i][j] * b;
        }
    }
    Ok(total)
}

/// A curve `Y = Y_1 + ... + Y_n`, the divisor `H = sum support_i Y_i`, and
/// the curves `H` is tested against.
#[derive(Clone, Debug)]
pub struct CurveConfig {
    pub name: String,
    pub lattice: Arc<PicardLattice>,
    pub components: Vec<(String, DivClass)>,
    pub support: Vec<i64>,
    pub tests: Vec<(String, DivClass)>,
    pub components_effective: bool,
    pub components_irreducible: bool,
    pub tests_effective: bool,
    pub assumptions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub curve: String,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub config: String,
    pub h_class: String,
    /// `H . Y_i` for every component.
    pub component_pairings: Vec<Pairing>,
    pub components_nonnegative: bool,
    /// `H . C_j` for every test curve.
    pub test_pairings: Vec<Pairing>,
    /// False for an empty test list: nothing was established.
    pub tests_positive: bool,
    pub y_squared: i64,
    pub connected: bool,
    pub irreducible: bool,
    /// No ample divisor can be supported on `Y`.
    pub ample_obstruction: bool,
    pub superheight_one: bool,
    pub not_affine: bool,
    pub verdict: String,
    pub assumptions: Vec<String>,
}

pub const VERDICT_BOTH: &str = "non-affine, superheight one (relative to test curves)";
pub const VERDICT_SUPHT_ONE: &str = "superheight one (relative to test curves)";
pub const VERDICT_NOT_AFFINE: &str = "not affine";
pub const VERDICT_NONE: &str = "no conclusion from this module";

/// Connected components of the dual graph (edges where `Y_i . Y_j > 0`).
pub fn dual_graph_components(classes: &[&DivClass]) -> Result<usize> {
    let n = classes.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && i != j && intersection(classes[i], classes[j])? > 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    Ok(count)
}

/// Evaluates the criterion. The superheight-one conclusion is relative to
/// the supplied test curves; the non-affine conclusion comes from `Y`
/// carrying no ample divisor (irreducible with `Y^2 = 0`, or disconnected).
pub fn check_criterion(cfg: &CurveConfig) -> Result<SurfaceReport> {
    if cfg.components.is_empty() {
        return Err(Error::Lattice(format!("`{}` has no components", cfg.name)));
    }
    if cfg.support.len() != cfg.components.len() {
        return Err(Error::Lattice(format!(
            "`{}`: {} support coefficients for {} components",
            cfg.name,
            cfg.support.len(),
            cfg.components.len()
        )));
    }
    if cfg.support.iter().any(|&c| c < 1) {
        return Err(Error::Lattice(format!(
            "`{}`: support coefficients must be at least 1 so that supp H = Y",
            cfg.name
        )));
    }
    if !cfg.components_effective || !cfg.components_irreducible {
        return Err(Error::Lattice(format!(
            "`{}`: components must be asserted `effective irreducible`",
            cfg.name
        )));
    }
    if !cfg.tests.is_empty() && !cfg.tests_effective {
        return Err(Error::Lattice(format!(
            "`{}`: test curves must be asserted `effective`",
            cfg.name
        )));
    }
    let mut h = DivClass::zero(&cfg.lattice);
    let mut y = DivClass::zero(&cfg.lattice);
    for ((_, c), &m) in cfg.components.iter().zip(&cfg.support) {
        h = h.add(&c.scale(m))?;
        y = y.add(c)?;
    }
    let component_pairings = cfg
        .components
        .iter()
        .map(|(n, c)| {
            Ok(Pairing {
                curve: n.clone(),
                value: intersection(&h, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let test_pairings = cfg
        .tests
        .iter()
        .map(|(n, c)| {
            Ok(Pairing {
                curve: n.clone(),
                value: intersection(&h, c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let components_nonnegative = component_pairings.iter().all(|p| p.value >= 0);
    let tests_positive = !test_pairings.is_empty() && test_pairings.iter().all(|p| p.value > 0);
    let y_squared = intersection(&y, &y)?;
    let classes: Vec<&DivClass> = cfg.components.iter().map(|(_, c)| c).collect();
    let connected = dual_graph_components(&classes)? == 1;
    let irreducible = cfg.components.len() == 1;
    let ample_obstruction = (irreducible && y_squared == 0) || !connected;
    let superheight_one = components_nonnegative && tests_positive;
    let verdict = match (superheight_one, ample_obstruction) {
        (true, true) => VERDICT_BOTH,
        (true, false) => VERDICT_SUPHT_ONE,
        (false, true) => VERDICT_NOT_AFFINE,
        (false, false) => VERDICT_NONE,
    };
    Ok(SurfaceReport {
        config: cfg.name.clone(),
        h_class: h.to_string(),
        component_pairings,
        components_nonnegative,
        test_pairings,
        tests_positive,
        y_squared,
        connected,
        irreducible,
        ample_obstruction,
        superheight_one,
        not_affine: ample_obstruction,
        verdict: verdict.into(),
        assumptions: cfg.assumptions.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_through_nine() -> (Arc<PicardLattice>, DivClass) {
        let l = blowup_lattice("S", 9);
        let y = DivClass::proper_transform(&l, 3, &[1; 9]).unwrap();
        (l, y)
    }

    #[test]
    fn diagonal_form() {
        let l = blowup_lattice("S", 3);
        let h = DivClass::basis(&l, 0);
        assert_eq!(intersection(&h, &h).unwrap(), 1);
        for i in 1..=3 {
            for j in 1..=3 {
                let e = intersection(&DivClass::basis(&l, i), &DivClass::basis(&l, j)).unwrap();
                assert_eq!(e, if i == j { -1 } else { 0 });
            }
        }
        assert_eq!(blowup_lattice("P", 0).rank(), 1);
    }

    #[test]
    fn cubic_has_square_zero() {
        let (_, y) = cubic_through_nine();
        assert_eq!(y.to_string(), "3*H - E1 - E2 - E3 - E4 - E5 - E6 - E7 - E8 - E9");
        assert_eq!(intersection(&y, &y).unwrap(), 0);
    }

    fn ex_6_1() -> CurveConfig {
        let (l, y) = cubic_through_nine();
        let mut tests = vec![("H".to_string(), DivClass::basis(&l, 0))];
        for i in 1..=9 {
            tests.push((format!("E{i}"), DivClass::basis(&l, i)));
        }
        tests.push((
            "Q".to_string(),
            DivClass::proper_transform(&l, 2, &[1, 1, 1, 1, 1]).unwrap(),
        ));
        CurveConfig {
            name: "cfg".into(),
            lattice: l,
            components: vec![("Y".into(), y)],
            support: vec![1],
            tests,
            components_effective: true,
            components_irreducible: true,
            tests_effective: true,
            assumptions: vec![],
        }
    }

    #[test]
    fn nine_point_blowup_verdict() {
        let r = check_criterion(&ex_6_1()).unwrap();
        let values: Vec<i64> = r.test_pairings.iter().map(|p| p.value).collect();
        assert_eq!(values[0], 3);
        assert!(values[1..10].iter().all(|&v| v == 1));
        assert_eq!(values[10], 1);
        assert_eq!(r.y_squared, 0);
        assert_eq!(r.verdict, VERDICT_BOTH);
    }

    #[test]
    fn empty_test_list_establishes_nothing() {
        let mut c = ex_6_1();
        c.tests.clear();
        let r = check_criterion(&c).unwrap();
        assert!(!r.tests_positive);
        assert_eq!(r.verdict, VERDICT_NOT_AFFINE);
    }

    #[test]
    fn one_point_blowup_is_disconnected() {
        let l = blowup_lattice("S", 1);
        let e = DivClass::basis(&l, 1);
        let c = DivClass::basis(&l, 0);
        assert_eq!(intersection(&e, &c).unwrap(), 0);
        let cfg = CurveConfig {
            name: "cfg".into(),
            lattice: l,
            components: vec![("E".into(), e), ("C".into(), c)],
            support: vec![1, 1],
            tests: vec![],
            components_effective: true,
            components_irreducible: true,
            tests_effective: false,
            assumptions: vec![],
        };
        let r = check_criterion(&cfg).unwrap();
        assert!(!r.connected);
        assert!(!r.components_nonnegative);
        assert_eq!(r.verdict, VERDICT_NOT_AFFINE);
    }

    #[test]
    fn line_in_plane_gives_no_conclusion() {
        let l = blowup_lattice("P", 0);
        let h = DivClass::basis(&l, 0);
        let cfg = CurveConfig {
            name: "cfg".into(),
            lattice: l,
            components: vec![("Y".into(), h)],
            support: vec![1],
            tests: vec![],
            components_effective: true,
            components_irreducible: true,
            tests_effective: false,
            assumptions: vec![],
        };
        let r = check_criterion(&cfg).unwrap();
        assert_eq!(r.y_squared, 1);
        assert!(r.connected);
        assert_eq!(r.verdict, VERDICT_NONE);
    }

    #[test]
    fn malformed_configs() {
        let mut c = ex_6_1();
        c.support = vec![0];
        assert!(check_criterion(&c).is_err());
        let mut c = ex_6_1();
        c.components_effective = false;
        assert!(check_criterion(&c).is_err());
        assert!(PicardLattice::new("M", vec!["a".into(), "b".into()], vec![vec![1, 2], vec![3, 1]]).is_err());
    }
}
