use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::rational::{self, Rational};
use crate::algebra::{AffineForm, Bindings, Symbol};
use crate::bracket::Bracket;
use crate::error::{Error, Result};

/// `matrix · unknowns = rhs`, one row per bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    unknowns: Vec<Symbol>,
    matrix: Vec<Vec<Rational>>,
    rhs: Vec<AffineForm>,
}

/// Exact solution of a square system together with its determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSolution {
    pub bindings: Bindings,
    pub determinant: Rational,
}

impl LinearSystem {
    pub fn new(unknowns: Vec<Symbol>, matrix: Vec<Vec<Rational>>, rhs: Vec<AffineForm>) -> Result<Self> {
        if matrix.len() != rhs.len() || matrix.iter().any(|row| row.len() != unknowns.len()) {
            return Err(Error::InvalidShape(format!(
                "{} rows, {} right sides, {} unknowns",
                matrix.len(),
                rhs.len(),
                unknowns.len()
            )));
        }
        Ok(Self { unknowns, matrix, rhs })
    }

    /// Reads `<a_1 n_1 + ... + c> = 0` as the row `a · n = -c`, where `c`
    /// collects everything that is not an unknown.
    pub fn from_brackets(brackets: &[Bracket], unknowns: &[Symbol]) -> Self {
        let mut matrix = Vec::with_capacity(brackets.len());
        let mut rhs = Vec::with_capacity(brackets.len());
        for b in brackets {
            matrix.push(unknowns.iter().map(|u| b.arg().coeff(u)).collect());
            let rest = unknowns.iter().fold(b.arg().clone(), |acc, u| acc.without(u));
            rhs.push(-rest);
        }
        Self { unknowns: unknowns.to_vec(), matrix, rhs }
    }

    pub fn unknowns(&self) -> &[Symbol] {
        &self.unknowns
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[AffineForm] {
        &self.rhs
    }

    pub fn is_square(&self) -> bool {
        self.matrix.len() == self.unknowns.len()
    }

    /// Fraction-free (Bareiss) elimination with row pivoting.
    pub fn solve(&self) -> Result<IndexSolution> {
        let n = self.unknowns.len();
        if !self.is_square() {
            return Err(Error::InvalidShape(format!("{}x{} system is not square", self.matrix.len(), n)));
        }
        let mut a = self.matrix.clone();
        let mut b = self.rhs.clone();
        let mut prev = Rational::one();
        let mut sign = Rational::one();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !a[r][k].is_zero()).ok_or_else(|| self.singular())?;
            if pivot != k {
                a.swap(pivot, k);
                b.swap(pivot, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                }
                b[i] = (b[i].scale(&a[k][k]) - b[k].scale(&a[i][k])).scale(&prev.recip());
                a[i][k] = Rational::zero();
            }
            prev = a[k][k].clone();
        }
        let determinant = sign * &a[n - 1][n - 1];
        let mut x: Vec<AffineForm> = vec![AffineForm::zero(); n];
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            for j in i + 1..n {
                acc = acc - x[j].scale(&a[i][j]);
            }
            x[i] = acc.scale(&a[i][i].recip());
        }
        let bindings = self.unknowns.iter().cloned().zip(x).collect();
        Ok(IndexSolution { bindings, determinant })
    }

    fn singular(&self) -> Error {
        Error::NoAssignment(format!("singular coefficient matrix\n{self}"))
    }

    pub fn explain(&self, solution: Option<&IndexSolution>) -> SystemDump {
        SystemDump {
            unknowns: self.unknowns.iter().map(|s| s.name().to_string()).collect(),
            matrix: self.matrix.iter().map(|row| row.iter().map(rational::format).collect()).collect(),
            rhs: self.rhs.iter().map(|f| f.to_string()).collect(),
            determinant: solution.map(|s| rational::format(&s.determinant)),
            abs_determinant: solution.map(|s| rational::format(&s.determinant.abs())),
            solution: solution
                .map(|s| self.unknowns.iter().map(|u| (u.name().to_string(), s.bindings[u].to_string())).collect())
                .unwrap_or_default(),
        }
    }
}

/// Recursive cofactor expansion along the first row; used as an independent
/// check on [`LinearSystem::solve`].
pub fn cofactor_determinant(m: &[Vec<Rational>]) -> Rational {
    match m.len() {
        0 => Rational::one(),
        1 => m[0][0].clone(),
        n => {
            let mut det = Rational::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Rational>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = &m[0][col] * cofactor_determinant(&minor);
                if col % 2 == 0 {
                    det += term;
                } else {
                    det -= term;
                }
            }
            det
        }
    }
}

/// Text and JSON dump of a solved system for explain traces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemDump {
    pub unknowns: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub rhs: Vec<String>,
    pub determinant: Option<String>,
    pub abs_determinant: Option<String>,
    pub solution: Vec<(String, String)>,
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.unknowns.iter().map(|s| s.name()).collect();
        writeln!(f, "unknowns: {}", names.join(", "))?;
        for (row, r) in self.matrix.iter().zip(&self.rhs) {
            let cells: Vec<String> = row.iter().map(rational::format).collect();
            writeln!(f, "  [{}] = {}", cells.join(" "), r)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::algebra::symbol::{alpha, beta};

    fn idx(n: &str) -> AffineForm {
        AffineForm::symbol(Symbol::index(n))
    }

    fn five_brackets() -> Vec<Bracket> {
        let half = AffineForm::constant(rat(1, 2));
        let a = AffineForm::symbol(alpha());
        let b = AffineForm::symbol(beta());
        [
            idx("k") - idx("i"),
            idx("m") + idx("l") + half.clone(),
            idx("n") + idx("m") + half,
            a + idx("n").scale(&int(2)) + idx("k").scale(&int(2)),
            b - idx("n").scale(&int(2)) + idx("k"),
        ]
        .into_iter()
        .map(|f| Bracket::new(f).unwrap())
        .collect()
    }

    #[test]
    fn five_index_system() {
        let unknowns: Vec<Symbol> = ["i", "k", "n", "m", "l"].iter().map(|n| Symbol::index(*n)).collect();
        let sys = LinearSystem::from_brackets(&five_brackets(), &unknowns);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.determinant, int(-6));
        assert_eq!(cofactor_determinant(sys.matrix()), int(-6));

        let a = AffineForm::symbol(alpha());
        let b = AffineForm::symbol(beta());
        let s = (&a + &b).scale(&rat(-1, 3));
        let w = (a - b.scale(&int(2))).scale(&rat(1, 6));
        assert_eq!(sol.bindings[&Symbol::index("i")], s);
        assert_eq!(sol.bindings[&Symbol::index("k")], s);
        assert_eq!(sol.bindings[&Symbol::index("n")], -&w);
        assert_eq!(sol.bindings[&Symbol::index("l")], -&w);
        assert_eq!(sol.bindings[&Symbol::index("m")], w.add_constant(&rat(-1, 2)));
        for br in five_brackets() {
            assert!(br.arg().substitute(&sol.bindings).unwrap().is_zero());
        }
    }

    #[test]
    fn singular_system_is_no_assignment() {
        let brackets = [
            Bracket::new(idx("s") + idx("z")).unwrap(),
            Bracket::new(idx("s").scale(&int(2)) + idx("z").scale(&int(2)) - AffineForm::constant(int(1))).unwrap(),
        ];
        let sys = LinearSystem::from_brackets(&brackets, &[Symbol::index("s"), Symbol::index("z")]);
        assert!(matches!(sys.solve(), Err(Error::NoAssignment(_))));
    }

    #[test]
    fn pivoting_required() {
        // first column starts with a zero
        let brackets =
            [Bracket::new(idx("m") - AffineForm::symbol(alpha())).unwrap(), Bracket::new(idx("n") + idx("m")).unwrap()];
        let sys = LinearSystem::from_brackets(&brackets, &[Symbol::index("n"), Symbol::index("m")]);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.determinant, int(-1));
        assert_eq!(sol.bindings[&Symbol::index("n")], -AffineForm::symbol(alpha()));
    }

    #[test]
    fn rectangular_rejected() {
        let brackets = [Bracket::new(idx("n") + idx("m")).unwrap()];
        let sys = LinearSystem::from_brackets(&brackets, &[Symbol::index("n"), Symbol::index("m")]);
        assert!(matches!(sys.solve(), Err(Error::InvalidShape(_))));
    }
}
