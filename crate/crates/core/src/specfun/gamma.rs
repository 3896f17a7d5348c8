use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;

/// Gamma function for real argument (Lanczos, g = 7).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs x > 0");
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Digamma `psi(x)` for `x > 0`.
pub fn digamma(mut x: f64) -> f64 {
    assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 20.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    // Bernoulli tail B_2k / (2k x^2k)
    let tail = x2
        * (1.0 / 12.0
            - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 * (1.0 / 132.0)))));
    acc + x.ln() - 0.5 / x - tail
}

fn lower_series(a: f64, x: f64) -> f64 {
    // gamma(a, x) for a > 0
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln()).exp()
}

fn upper_cf(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln()).exp() * h
}

fn exp_integral_e1(x: f64) -> f64 {
    if x >= 1.0 {
        return upper_cf(0.0, x);
    }
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < EPS * sum.abs().max(1e-300) {
            break;
        }
    }
    -super::EULER_GAMMA - x.ln() - sum
}

/// Upper incomplete gamma `Gamma(a, x) = int_x^inf t^(a-1) e^-t dt` for real
/// `a` (any sign) and `x > 0`.
pub fn upper_gamma(a: f64, x: f64) -> f64 {
    assert!(x > 0.0, "upper_gamma needs x > 0");
    if x > 740.0 + a.abs() * x.ln().max(0.0) {
        return 0.0;
    }
    if a > 0.0 {
        if x < a + 1.0 {
            gamma(a) - lower_series(a, x)
        } else {
            upper_cf(a, x)
        }
    } else if x >= 1.0 {
        upper_cf(a, x)
    } else {
        // recur downward from a + k > 0:
        // Gamma(a, x) = (Gamma(a + 1, x) - x^a e^-x) / a
        let k = (-a).floor() as i64 + 1;
        let top = a + k as f64;
        let integral = (top - 1.0).abs() < 1e-15 && (a - a.round()).abs() < 1e-15;
        let (mut g, mut cur) = if integral {
            (exp_integral_e1(x), 0.0)
        } else if top >= 1.0 {
            (upper_gamma(top, x), top)
        } else {
            (gamma(top) - lower_series(top, x), top)
        };
        while cur - a > 0.5 {
            let next = cur - 1.0;
            g = (g - x.powf(next) * (-x).exp()) / next;
            cur = next;
        }
        g
    }
}
