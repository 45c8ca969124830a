//! Small dense linear algebra over a finite field.

use rand::Rng;

use crate::field::{Field, FieldElement};

/// 3×3 matrix acting on column vectors of plane coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mat3(pub [[FieldElement; 3]; 3]);

impl Mat3 {
    pub fn identity(f: &Field) -> Mat3 {
        let mut m = [[f.zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = f.one();
        }
        Mat3(m)
    }

    /// Matrix with the given columns.
    pub fn from_columns(c: [[FieldElement; 3]; 3]) -> Mat3 {
        let mut m = [[FieldElement::ZERO; 3]; 3];
        for (j, col) in c.iter().enumerate() {
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        Mat3(m)
    }

    pub fn det(&self, f: &Field) -> FieldElement {
        let m = &self.0;
        let minor = |a: usize, b: usize, c: usize, d: usize| f.sub(f.mul(m[1][a], m[2][b]), f.mul(m[1][c], m[2][d]));
        let t0 = f.mul(m[0][0], minor(1, 2, 2, 1));
        let t1 = f.mul(m[0][1], minor(0, 2, 2, 0));
        let t2 = f.mul(m[0][2], minor(0, 1, 1, 0));
        f.add(f.sub(t0, t1), t2)
    }

    pub fn inverse(&self, f: &Field) -> Option<Mat3> {
        let d = self.det(f);
        if d.is_zero() {
            return None;
        }
        let di = f.inv(d).unwrap();
        let m = &self.0;
        let mut out = [[f.zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                // cofactor of (j, i)
                let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                let c = f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
                out[i][j] = f.mul(c, di);
            }
        }
        Some(Mat3(out))
    }

    pub fn apply(&self, f: &Field, v: [FieldElement; 3]) -> [FieldElement; 3] {
        let mut out = [f.zero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, &vj) in v.iter().enumerate() {
                *o = f.add(*o, f.mul(self.0[i][j], vj));
            }
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &Mat3) -> Mat3 {
        let mut out = [[f.zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, o) in row.iter_mut().enumerate() {
                for k in 0..3 {
                    *o = f.add(*o, f.mul(self.0[i][k], other.0[k][j]));
                }
            }
        }
        Mat3(out)
    }

    pub fn random_invertible<R: Rng>(f: &Field, rng: &mut R) -> Mat3 {
        loop {
            let mut m = [[f.zero(); 3]; 3];
            for row in m.iter_mut() {
                for x in row.iter_mut() {
                    *x = f.from_index(rng.gen_range(0..f.q()));
                }
            }
            let m = Mat3(m);
            if !m.det(f).is_zero() {
                return m;
            }
        }
    }

    pub fn embed(&self, src: &Field, target: &Field) -> crate::error::Result<Mat3> {
        let mut out = [[target.zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = src.embed(self.0[i][j], target)?;
            }
        }
        Ok(Mat3(out))
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(f: &Field, m: &mut [Vec<FieldElement>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = f.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let t = m[i][c];
                for j in 0..cols {
                    let v = f.mul(t, m[r][j]);
                    m[i][j] = f.sub(m[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace, one vector per free column (in column order),
/// each with a 1 in its free column.
pub fn nullspace(f: &Field, m: &[Vec<FieldElement>], cols: usize) -> (usize, Vec<Vec<FieldElement>>) {
    let mut a = m.to_vec();
    let pivots = row_reduce(f, &mut a);
    let rank = pivots.len();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(a[r][free]);
        }
        basis.push(v);
    }
    (rank, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn inverse_roundtrip() {
        let f = Field::gf9();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = Mat3::random_invertible(&f, &mut rng);
            let inv = m.inverse(&f).unwrap();
            assert_eq!(m.mul(&f, &inv), Mat3::identity(&f));
        }
    }

    #[test]
    fn nullspace_dimension() {
        let f = Field::prime(3).unwrap();
        let m = vec![vec![f.one(), f.one(), f.zero()], vec![f.from_int(2), f.from_int(2), f.zero()]];
        let (rank, basis) = nullspace(&f, &m, 3);
        assert_eq!(rank, 1);
        assert_eq!(basis.len(), 2);
        for v in basis {
            for row in &m {
                let s = row.iter().zip(&v).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert!(s.is_zero());
            }
        }
    }
}
