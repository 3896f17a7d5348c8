use num_complex::Complex64;
use rayon::prelude::*;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        iter.into_iter().for_each(|v| s.add(v));
        s
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexCompensatedSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexCompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: Complex64) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex64> for ComplexCompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::new();
        iter.into_iter().for_each(|v| s.add(v));
        s
    }
}

/// Parallel sum of `f` over `items` that is bitwise reproducible for any
/// thread count: chunk boundaries are fixed by `chunk`, each chunk is summed
/// serially with compensation and the partials are combined in order.
pub fn ordered_par_sum<T, F>(items: &[T], chunk: usize, f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let partials: Vec<f64> = items
        .par_chunks(chunk.max(1))
        .map(|c| c.iter().map(&f).collect::<CompensatedSum>().value())
        .collect();
    partials.into_iter().collect::<CompensatedSum>().value()
}

pub fn ordered_par_sum_c<T, F>(items: &[T], chunk: usize, f: F) -> Complex64
where
    T: Sync,
    F: Fn(&T) -> Complex64 + Sync,
{
    let partials: Vec<Complex64> = items
        .par_chunks(chunk.max(1))
        .map(|c| c.iter().map(&f).collect::<ComplexCompensatedSum>().value())
        .collect();
    partials
        .into_iter()
        .collect::<ComplexCompensatedSum>()
        .value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_mass() {
        let v = [1.0, 1e100, 1.0, -1e100];
        let s: CompensatedSum = v.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn parallel_sum_is_thread_count_independent() {
        let xs: Vec<f64> = (1..20_000).map(|k| 1.0 / (k as f64).powf(1.3)).collect();
        let a = ordered_par_sum(&xs, 512, |x| *x);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| ordered_par_sum(&xs, 512, |x| *x));
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
