#![allow(dead_code, clippy::excessive_precision)]

//! Oracles shared by the integration tests. None of them call into the
//! library's coefficient or field code.

/// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod integral of a smooth integrand.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (v, err) = gk15(f, a, b);
    if err <= tol || (b - a) < 1e-12 {
        return v;
    }
    let m = 0.5 * (a + b);
    integrate(f, a, m, 0.5 * tol) + integrate(f, m, b, 0.5 * tol)
}

/// Least-squares slope of `y` on `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Closed-form `c_ν` of `h·1_(a,b)`, written independently of the library.
pub fn pulse_coefficient(a: f64, b: f64, h: f64, nu: i64) -> (f64, f64) {
    use std::f64::consts::TAU;
    if nu == 0 {
        return (h * (b - a) / TAU, 0.0);
    }
    let v = nu as f64;
    // (e^{−iνa} − e^{−iνb}) / (2πiν)
    (
        h * ((v * b).sin() - (v * a).sin()) / (TAU * v),
        h * ((v * b).cos() - (v * a).cos()) / (TAU * v),
    )
}
