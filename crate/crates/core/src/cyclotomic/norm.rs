use super::CycloElem;
use crate::linalg::det_mod;
use crate::scalar::{PadicScalar, Residue};

impl<T: Residue> CycloElem<T> {
    /// `N_{K|Q_p}(x) = Π_{j=1}^{p-1} σ_j(x)`.
    ///
    /// Reduction mod `p^k` is a ring map `Z_p[ζ] → (Z/p^k)[ζ]` commuting with
    /// every `σ_j`, so the product is the norm modulo `p^k` exactly: no
    /// precision is lost, for units or otherwise.
    pub fn absolute_norm(&self) -> PadicScalar<T> {
        let mut acc = self.clone();
        for j in 2..self.p() as i64 {
            acc = &acc * &self.galois(j).expect("j is prime to p");
        }
        debug_assert!(
            acc.coeffs()[1..].iter().all(|c| c.is_zero()),
            "norm is not rational"
        );
        self.scalar(acc.coeffs()[0])
    }

    /// The same norm as the determinant of multiplication by `x` on the
    /// ζ-power basis.
    pub fn absolute_norm_det(&self) -> PadicScalar<T> {
        let d = self.ctx().degree();
        let mut columns = Vec::with_capacity(d);
        let mut col = self.clone();
        let zeta = self.ctx().zeta();
        for _ in 0..d {
            columns.push(col.coeffs().to_vec());
            col = &col * &zeta;
        }
        let matrix = (0..d)
            .map(|r| (0..d).map(|c| columns[c][r]).collect())
            .collect();
        self.scalar(det_mod(matrix, self.ctx().modulus()))
    }

    /// `N_{K|K⁺}(x) = x · σ_{-1}(x)`.
    pub fn half_norm(&self) -> Self {
        self * &self.conj()
    }

    fn scalar(&self, value: T) -> PadicScalar<T> {
        PadicScalar {
            value,
            p: self.p(),
            k: self.ctx().k(),
        }
    }
}
