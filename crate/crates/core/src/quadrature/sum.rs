use super::QuadValue;

/// Compensated (Neumaier) summation. Summing in a fixed order gives
/// bit-identical results regardless of how the terms were computed.
#[derive(Debug, Clone, Copy)]
pub struct NeumaierSum<T> {
    sum: T,
    comp: T,
}

impl<T: QuadValue> Default for NeumaierSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: QuadValue> NeumaierSum<T> {
    pub fn new() -> Self {
        NeumaierSum { sum: T::zero(), comp: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.magnitude() >= x.magnitude() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

impl<T: QuadValue> FromIterator<T> for NeumaierSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
