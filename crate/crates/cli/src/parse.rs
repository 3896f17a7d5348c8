//! Command-line encodings: points `x,y,r`, ring elements `p+qw`, matrices
//! `a,b;c,d`.

use anyhow::{anyhow, bail, Context, Result};

use bianchi_klf::{AlgInt, HPoint, ImagQuadField, IntMatrix};

pub fn point(s: &str) -> Result<HPoint> {
    let xs: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| anyhow!("{e}: {t:?}")))
        .collect::<Result<_>>()
        .with_context(|| format!("point {s:?}"))?;
    let [x, y, r] = xs[..] else { bail!("point {s:?}: expected x,y,r") };
    Ok(HPoint::from_xyr(x, y, r)?)
}

fn int(t: &str) -> Result<i64> {
    t.parse::<i64>().map_err(|e| anyhow!("{e}: {t:?}"))
}

/// coefficient of `w`, where a bare sign means one
fn coef(t: &str) -> Result<i64> {
    match t {
        "" | "+" => Ok(1),
        "-" => Ok(-1),
        _ => int(t),
    }
}

/// `p`, `qw`, `p+qw` or `p-qw`, with `w` the second ring basis element.
pub fn alg(f: &ImagQuadField, s: &str) -> Result<AlgInt> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let ctx = || format!("ring element {s:?}");
    let Some(body) = t.strip_suffix('w') else {
        return Ok(f.int(int(&t).with_context(ctx)?));
    };
    // the sign that starts the w part, if it is not the leading sign
    let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
    let (p, q) = match split {
        Some(i) => (int(&body[..i]).with_context(ctx)?, coef(&body[i..]).with_context(ctx)?),
        None => (0, coef(body).with_context(ctx)?),
    };
    Ok(f.elt(p, q))
}

pub fn matrix(f: &ImagQuadField, s: &str) -> Result<IntMatrix> {
    let rows: Vec<&str> = s.split(';').collect();
    let entries: Vec<AlgInt> = rows
        .iter()
        .flat_map(|r| r.split(','))
        .map(|e| alg(f, e))
        .collect::<Result<_>>()
        .with_context(|| format!("matrix {s:?}"))?;
    let [a, b, c, d] = entries[..] else { bail!("matrix {s:?}: expected a,b;c,d") };
    if rows.len() != 2 {
        bail!("matrix {s:?}: expected two rows");
    }
    IntMatrix::new(a, b, c, d).with_context(|| format!("matrix {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_elements_round_trip_through_display() {
        let f = ImagQuadField::new(-7).unwrap();
        for (p, q) in [(0, 0), (3, 0), (-2, 0), (0, 1), (0, -1), (0, 4), (1, 1), (-1, -3), (5, -2)] {
            let a = f.elt(p, q);
            assert_eq!(alg(&f, &a.to_string()).unwrap(), a, "{a}");
        }
        assert_eq!(alg(&f, "w").unwrap(), f.elt(0, 1));
        assert_eq!(alg(&f, "-w").unwrap(), f.elt(0, -1));
        assert_eq!(alg(&f, "1 - w").unwrap(), f.elt(1, -1));
        assert!(alg(&f, "1+x").is_err());
        assert!(alg(&f, "").is_err());
        assert!(alg(&f, "+w+w").is_err());
    }

    #[test]
    fn matrices_and_points() {
        let f = ImagQuadField::gaussian();
        let m = matrix(&f, "1,1;1,2").unwrap();
        assert_eq!(m.d, f.int(2));
        let m = matrix(&f, "w,0;0,-w").unwrap();
        assert_eq!(m.a, f.elt(0, 1));
        assert!(matrix(&f, "1,1;1,1").is_err());
        assert!(matrix(&f, "1,1,1,2").is_err());
        let u = point("0.3,0.4,0.9").unwrap();
        assert_eq!((u.z.re, u.z.im, u.r), (0.3, 0.4, 0.9));
        assert!(point("0.3,0.4,-1").is_err());
        assert!(point("0.3,0.4").is_err());
    }
}
