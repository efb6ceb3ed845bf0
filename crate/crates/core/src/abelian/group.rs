//! Descriptions of the groups the analysis produces, and the two
//! constructions on stationary limits it needs: quotient by an invariant
//! cyclic subgroup and kernel of an invariant functional.

use std::fmt;

use crate::abelian::limit::StationaryLimit;
use crate::abelian::normal_form::{hermite_rows, lattice_coordinates, smith_normal_form};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::{gcd_all, Int};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescription<T: Int> {
    Zero,
    /// `Z`
    FreeCyclic,
    /// `Z/q`, `q >= 2`
    FiniteCyclic(T),
    StationaryLimit(StationaryLimit<T>),
    /// A group whose torsion subgroup is the product of the listed cyclic
    /// groups, with the given torsion-free quotient. Whether the extension
    /// splits is not decided.
    Composite {
        torsion: Vec<T>,
        quotient: Box<GroupDescription<T>>,
    },
}

impl<T: Int> GroupDescription<T> {
    /// `Zero` for a rank-zero limit, otherwise the limit itself.
    pub fn from_limit(g: StationaryLimit<T>) -> Self {
        if g.rank() == 0 {
            GroupDescription::Zero
        } else {
            GroupDescription::StationaryLimit(g)
        }
    }

    pub fn limit_of(a: &Matrix<T>) -> Result<Self, Error> {
        Ok(Self::from_limit(StationaryLimit::new(a)?))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::FreeCyclic => "free_cyclic",
            Self::FiniteCyclic(_) => "finite_cyclic",
            Self::StationaryLimit(_) => "stationary_limit",
            Self::Composite { .. } => "composite",
        }
    }

    /// Orders of the cyclic factors of the torsion subgroup.
    pub fn torsion(&self) -> Vec<T> {
        match self {
            Self::FiniteCyclic(q) => vec![q.clone()],
            Self::Composite { torsion, .. } => torsion.clone(),
            _ => Vec::new(),
        }
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion().is_empty()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Zero)
    }

    /// Rank of the torsion-free part.
    pub fn rank(&self) -> usize {
        match self {
            Self::Zero | Self::FiniteCyclic(_) => 0,
            Self::FreeCyclic => 1,
            Self::StationaryLimit(g) => g.rank(),
            Self::Composite { quotient, .. } => quotient.rank(),
        }
    }

    /// Characteristic polynomial of the torsion-free part's presenting
    /// matrix (`x - 1` for `Z`, `1` for finite groups).
    pub fn charpoly(&self) -> Vec<T> {
        match self {
            Self::Zero | Self::FiniteCyclic(_) => vec![T::one()],
            Self::FreeCyclic => vec![T::one(), -T::one()],
            Self::StationaryLimit(g) => g.charpoly().to_vec(),
            Self::Composite { quotient, .. } => quotient.charpoly(),
        }
    }

    pub fn abs_det(&self) -> T {
        match self {
            Self::StationaryLimit(g) => g.abs_det().clone(),
            Self::Composite { quotient, .. } => quotient.abs_det(),
            _ => T::one(),
        }
    }

    /// The torsion-free part as a stationary limit, if it is one.
    pub fn limit(&self) -> Option<&StationaryLimit<T>> {
        match self {
            Self::StationaryLimit(g) => Some(g),
            Self::Composite { quotient, .. } => quotient.limit(),
            _ => None,
        }
    }

    /// Invariants compared when two descriptions are presented differently:
    /// kind, rank, charpoly, |det| and torsion.
    pub fn same_invariants(&self, other: &Self) -> bool {
        self.kind() == other.kind()
            && self.rank() == other.rank()
            && self.charpoly() == other.charpoly()
            && self.abs_det() == other.abs_det()
            && self.torsion() == other.torsion()
    }
}

fn render_limit<T: Int>(g: &StationaryLimit<T>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let r = g.rank();
    if g.is_free() {
        return if r == 1 { write!(f, "Z") } else { write!(f, "Z^{r}") };
    }
    if r == 1 {
        return write!(f, "Z[1/{}]", g.abs_det());
    }
    write!(f, "lim(Z^{r}, A) with charpoly ")?;
    write_poly(g.charpoly(), f)?;
    write!(f, ", |det| {}", g.abs_det())
}

fn write_poly<T: Int>(coeffs: &[T], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let deg = coeffs.len() - 1;
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let p = deg - i;
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        let coef = if a.is_one() && p > 0 { String::new() } else { a.to_string() };
        match p {
            0 => write!(f, "{a}")?,
            1 => write!(f, "{coef}x")?,
            _ => write!(f, "{coef}x^{p}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl<T: Int> fmt::Display for GroupDescription<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero => write!(f, "0"),
            Self::FreeCyclic => write!(f, "Z"),
            Self::FiniteCyclic(q) => write!(f, "Z_{q}"),
            Self::StationaryLimit(g) => render_limit(g, f),
            Self::Composite { torsion, quotient } => {
                let tor: Vec<String> = torsion.iter().map(|q| format!("Z_{q}")).collect();
                write!(f, "torsion {} with torsion-free quotient {}", tor.join(" + "), quotient)
            }
        }
    }
}

/// Whether `A v = v` or `A v = -v`.
pub fn invariance_sign<T: Int>(a: &Matrix<T>, v: &[T]) -> Option<i8> {
    let av = a.mul_vec(v);
    if av == v {
        Some(1)
    } else if av.iter().zip(v).all(|(x, y)| *x == -y.clone()) {
        Some(-1)
    } else {
        None
    }
}

/// `lim(Z^m, A) / <c·[w, 1]>` for a primitive `w` with `A w = ±w`.
///
/// Since `Z^m / <w>` is torsion free and `[w, 1] ≠ 0`, the torsion subgroup is
/// cyclic of order `c`, generated by `[w, 1]`, and the torsion-free quotient
/// is the limit of the action of `A` on `Z^m / <w>`.
pub fn quotient_by_invariant_vector<T: Int>(
    a: &Matrix<T>,
    w: &[T],
    c: &T,
) -> Result<GroupDescription<T>, Error> {
    if !a.is_square() || a.rows() != w.len() {
        return Err(Error::Dimension("matrix and vector sizes differ".into()));
    }
    if !c.is_positive() {
        return Err(Error::Precondition("multiplier must be positive".into()));
    }
    if w.iter().all(|x| x.is_zero()) {
        return GroupDescription::limit_of(a);
    }
    if !gcd_all(w).is_one() {
        return Err(Error::Precondition("vector is not primitive".into()));
    }
    let Some(sign) = invariance_sign(a, w) else {
        return Err(Error::Precondition("vector is not invariant under the matrix".into()));
    };
    // columns of U form a basis of Z^m whose first element is ±w
    let s = smith_normal_form(&Matrix::column(w));
    let conj = &(&s.u_inv * a) * &s.u;
    let m = a.rows();
    if (1..m).any(|i| !conj[(i, 0)].is_zero()) || conj[(0, 0)] != T::from_i64_exact(sign.into()) {
        return Err(Error::Inconsistent("basis extension does not split off w".into()));
    }
    let induced = conj.block(1, m, 1, m);
    let quotient = GroupDescription::limit_of(&induced)?;
    if c.is_one() {
        return Ok(quotient);
    }
    Ok(GroupDescription::Composite {
        torsion: vec![c.clone()],
        quotient: Box::new(quotient),
    })
}

/// Integral basis (as rows, Hermite form) of `ker(functional) ∩ Z^m`.
pub fn kernel_basis<T: Int>(functional: &[T]) -> Matrix<T> {
    let m = functional.len();
    if functional.iter().all(|x| x.is_zero()) {
        return Matrix::identity(m);
    }
    let s = smith_normal_form(&Matrix::row_matrix(functional));
    // functional · x = U D V x vanishes iff (V x)_0 = 0
    hermite_rows(&s.v_inv.block(0, m, 1, m).transpose())
}

/// The kernel of an invariant functional `w*` (`w* A = ±w*`) on
/// `lim(Z^m, A)`, as the limit of `A` restricted to `ker(w*) ∩ Z^m`.
pub fn kernel_of_invariant_functional<T: Int>(
    a: &Matrix<T>,
    functional: &[T],
) -> Result<GroupDescription<T>, Error> {
    if !a.is_square() || a.rows() != functional.len() {
        return Err(Error::Dimension("matrix and functional sizes differ".into()));
    }
    if functional.iter().all(|x| x.is_zero()) {
        return GroupDescription::limit_of(a);
    }
    if invariance_sign(&a.transpose(), functional).is_none() {
        return Err(Error::Precondition("functional is not invariant under the matrix".into()));
    }
    GroupDescription::limit_of(&restrict_to_kernel(a, functional)?)
}

/// Matrix of `A` on `ker(functional) ∩ Z^m` in its Hermite basis.
pub fn restrict_to_kernel<T: Int>(a: &Matrix<T>, functional: &[T]) -> Result<Matrix<T>, Error> {
    let basis = kernel_basis(functional);
    let k = basis.rows();
    let mut restricted = Matrix::zeros(k, k);
    for j in 0..k {
        let image = a.mul_vec(basis.row(j));
        let coords = lattice_coordinates(&basis, &image)
            .ok_or_else(|| Error::Precondition("kernel is not invariant under the matrix".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            restricted[(i, j)] = c;
        }
    }
    Ok(restricted)
}
