//! Compensated summation.
//!
//! All reductions in the crate walk their inputs in a fixed order and
//! accumulate with Neumaier's variant of Kahan summation, so results are
//! bit-reproducible and identities such as `sum(P_up) == norm²` hold far
//! below the 1e-12 level.

#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

pub fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = Accumulator::new();
    for v in values {
        acc.add(v);
    }
    acc.total()
}
