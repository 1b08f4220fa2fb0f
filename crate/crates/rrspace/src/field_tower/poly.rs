use super::Field;

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly<E> {
    c: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn from_vec<F: Field<Elem = E>>(f: &F, mut c: Vec<E>) -> Self {
        while c.last().is_some_and(|x| f.is_zero(x)) {
            c.pop();
        }
        Poly { c }
    }

    pub fn constant<F: Field<Elem = E>>(f: &F, a: E) -> Self {
        Self::from_vec(f, vec![a])
    }

    pub fn one<F: Field<Elem = E>>(f: &F) -> Self {
        Poly { c: vec![f.one()] }
    }

    /// The monomial a·X^k.
    pub fn monomial<F: Field<Elem = E>>(f: &F, a: E, k: usize) -> Self {
        if f.is_zero(&a) {
            return Self::zero();
        }
        let mut c = vec![f.zero(); k + 1];
        c[k] = a;
        Poly { c }
    }

    pub fn x<F: Field<Elem = E>>(f: &F) -> Self {
        Self::monomial(f, f.one(), 1)
    }

    pub fn coeffs(&self) -> &[E] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with -1 for the zero polynomial.
    pub fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }

    pub fn lead(&self) -> Option<&E> {
        self.c.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, f: &F, i: usize) -> E {
        self.c.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn is_one<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.c.len() == 1 && f.is_one(&self.c[0])
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.lead().is_some_and(|l| f.is_one(l))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_vec(f, v)
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let v = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => f.sub(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => f.neg(b),
                (None, None) => unreachable!(),
            })
            .collect();
        Self::from_vec(f, v)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Poly {
            c: self.c.iter().map(|a| f.neg(a)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, a: &E) -> Self {
        if f.is_zero(a) {
            return Self::zero();
        }
        Poly {
            c: self.c.iter().map(|x| f.mul(x, a)).collect(),
        }
    }

    /// Multiplication by X^k.
    pub fn shift<F: Field<Elem = E>>(&self, f: &F, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![f.zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn mul<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] = f.add(&v[i + j], &f.mul(a, b));
            }
        }
        Self::from_vec(f, v)
    }

    pub fn pow<F: Field<Elem = E>>(&self, f: &F, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base);
            }
        }
        acc
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn divrem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        if self.c.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let inv = f.inv(d.lead().unwrap());
        let mut r = self.c.clone();
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(&r[k], &inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k - dd + j] = f.sub(&r[k - dd + j], &f.mul(&c, dj));
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        (Self::from_vec(f, q), Self::from_vec(f, r))
    }

    pub fn rem<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Self {
        self.divrem(f, d).1
    }

    pub fn quo<F: Field<Elem = E>>(&self, f: &F, d: &Self) -> Self {
        self.divrem(f, d).0
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => self.scale(f, &f.inv(l)),
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// (g, s, t) with s·self + t·o = g monic.
    pub fn xgcd<F: Field<Elem = E>>(&self, f: &F, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(f, &r1);
            let s2 = s0.sub(f, &q.mul(f, &s1));
            let t2 = t0.sub(f, &q.mul(f, &t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.lead() {
            None => (r0, s0, t0),
            Some(l) => {
                let il = f.inv(l);
                (r0.scale(f, &il), s0.scale(f, &il), t0.scale(f, &il))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let v = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| f.mul(a, &f.from_int((i as u64 % f.characteristic()) as i64)))
            .collect();
        Self::from_vec(f, v)
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &E) -> E {
        let mut acc = f.zero();
        for a in self.c.iter().rev() {
            acc = f.add(&f.mul(&acc, x), a);
        }
        acc
    }

    /// self(g).
    pub fn compose<F: Field<Elem = E>>(&self, f: &F, g: &Self) -> Self {
        let mut acc = Self::zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(f, g).add(f, &Self::constant(f, a.clone()));
        }
        acc
    }

    /// self^e mod m.
    pub fn powmod<F: Field<Elem = E>>(&self, f: &F, mut e: u128, m: &Self) -> Self {
        let mut base = self.rem(f, m);
        let mut acc = Self::one(f).rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(f, &base).rem(f, m);
            }
        }
        acc
    }

    /// Applies `g` to every coefficient.
    pub fn map<F: Field, G: Fn(&E) -> F::Elem>(&self, f: &F, g: G) -> Poly<F::Elem> {
        Poly::from_vec(f, self.c.iter().map(g).collect())
    }

    /// Sort key: degree, then coordinates of each coefficient from low degree up.
    pub fn sort_key<F: Field<Elem = E>>(&self, f: &F) -> (isize, Vec<Vec<u64>>) {
        (self.deg(), self.c.iter().map(|a| f.coords(a)).collect())
    }
}
