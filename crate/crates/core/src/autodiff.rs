//! Forward-mode jets of metric components built on `num-dual`.

use nalgebra::{Const, Matrix3, Vector3, U1};
use num_dual::{Derivative, Dual2SVec64, DualNum, DualSVec64};

pub trait Real: DualNum<Primitive = f64> + Copy {}
impl<T: DualNum<Primitive = f64> + Copy> Real for T {}

pub type D1 = DualSVec64<3>;
pub type D2 = Dual2SVec64<3>;

/// Index of the (i, j) entry in the packed symmetric layout
/// `[00, 01, 02, 11, 12, 22]`.
pub const fn sym_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

pub fn unpack(c: &[f64; 6]) -> Matrix3<f64> {
    Matrix3::new(c[0], c[1], c[2], c[1], c[3], c[4], c[2], c[4], c[5])
}

pub fn pack(m: &Matrix3<f64>) -> [f64; 6] {
    [m[(0, 0)], m[(0, 1)], m[(0, 2)], m[(1, 1)], m[(1, 2)], m[(2, 2)]]
}

pub fn seed1(p: [f64; 3]) -> [D1; 3] {
    std::array::from_fn(|i| {
        D1::new(
            p[i],
            Derivative::derivative_generic(Const::<3>, U1, i),
        )
    })
}

pub fn seed2(p: [f64; 3]) -> [D2; 3] {
    std::array::from_fn(|i| {
        D2::new(
            p[i],
            Derivative::derivative_generic(U1, Const::<3>, i),
            Derivative::none(),
        )
    })
}

pub fn split1(d: &D1) -> (f64, Vector3<f64>) {
    (d.re, d.eps.unwrap_generic(Const::<3>, U1))
}

pub fn split2(d: &D2) -> (f64, Vector3<f64>, Matrix3<f64>) {
    (
        d.re,
        d.v1.unwrap_generic(U1, Const::<3>).transpose(),
        d.v2.unwrap_generic(Const::<3>, Const::<3>),
    )
}

/// Value and first partials of a packed symmetric field.
pub fn sym_jet1(c: &[D1; 6]) -> (Matrix3<f64>, [Matrix3<f64>; 3]) {
    let mut g = [0.0; 6];
    let mut dg = [[0.0; 6]; 3];
    for (n, ci) in c.iter().enumerate() {
        let (v, d) = split1(ci);
        g[n] = v;
        for k in 0..3 {
            dg[k][n] = d[k];
        }
    }
    (unpack(&g), std::array::from_fn(|k| unpack(&dg[k])))
}

/// Value, first and second partials of a packed symmetric field.
#[allow(clippy::type_complexity)]
pub fn sym_jet2(
    c: &[D2; 6],
) -> (Matrix3<f64>, [Matrix3<f64>; 3], [[Matrix3<f64>; 3]; 3]) {
    let mut g = [0.0; 6];
    let mut dg = [[0.0; 6]; 3];
    let mut ddg = [[[0.0; 6]; 3]; 3];
    for (n, ci) in c.iter().enumerate() {
        let (v, d, h) = split2(ci);
        g[n] = v;
        for k in 0..3 {
            dg[k][n] = d[k];
            for l in 0..3 {
                ddg[k][l][n] = h[(k, l)];
            }
        }
    }
    (
        unpack(&g),
        std::array::from_fn(|k| unpack(&dg[k])),
        std::array::from_fn(|k| std::array::from_fn(|l| unpack(&ddg[k][l]))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hessian_of_product() {
        let p = seed2([0.3, -1.2, 2.0]);
        let f = p[0] * p[1] * p[1] + p[2].sin();
        let (v, g, h) = split2(&f);
        assert!((v - (0.3 * 1.44 + 2.0f64.sin())).abs() < 1e-15);
        assert!((g[0] - 1.44).abs() < 1e-15);
        assert!((g[1] - 2.0 * 0.3 * -1.2).abs() < 1e-15);
        assert!((h[(0, 1)] - 2.0 * -1.2).abs() < 1e-15);
        assert!((h[(2, 2)] + 2.0f64.sin()).abs() < 1e-15);
    }
}
