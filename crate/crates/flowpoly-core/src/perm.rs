//! Permutations of link labels 0..l−1.

pub const MAX_LABELS: usize = 16;

/// Permutation in one-line notation: `self.0[j]` is the image of j.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    len: u8,
    img: [u8; MAX_LABELS],
}

impl Perm {
    pub fn identity(l: usize) -> Self {
        assert!(l <= MAX_LABELS);
        let mut img = [0u8; MAX_LABELS];
        for (j, x) in img.iter_mut().enumerate().take(l) {
            *x = j as u8;
        }
        Perm { len: l as u8, img }
    }

    pub fn from_images(images: &[usize]) -> Option<Self> {
        let l = images.len();
        if l > MAX_LABELS {
            return None;
        }
        let mut seen = 0u32;
        let mut img = [0u8; MAX_LABELS];
        for (j, &x) in images.iter().enumerate() {
            if x >= l || seen >> x & 1 == 1 {
                return None;
            }
            seen |= 1 << x;
            img[j] = x as u8;
        }
        Some(Perm { len: l as u8, img })
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn apply(&self, j: usize) -> usize {
        self.img[j] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.img[..self.len as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images().iter().enumerate().all(|(j, &x)| j == x as usize)
    }

    /// (self ∘ other)(j) = self(other(j)).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.len, other.len);
        let mut img = [0u8; MAX_LABELS];
        for j in 0..self.len() {
            img[j] = self.img[other.img[j] as usize];
        }
        Perm { len: self.len, img }
    }

    pub fn inverse(&self) -> Perm {
        let mut img = [0u8; MAX_LABELS];
        for j in 0..self.len() {
            img[self.img[j] as usize] = j as u8;
        }
        Perm { len: self.len, img }
    }

    /// Adjacent transposition (i, i+1).
    pub fn adjacent(l: usize, i: usize) -> Perm {
        let mut p = Perm::identity(l);
        p.img.swap(i, i + 1);
        p
    }

    /// A position i with self(i) > self(i+1), if any.
    pub fn first_descent(&self) -> Option<usize> {
        (0..self.len().saturating_sub(1)).find(|&i| self.img[i] > self.img[i + 1])
    }

    pub fn inversions(&self) -> usize {
        let v = self.images();
        (0..v.len()).map(|i| (i + 1..v.len()).filter(|&j| v[i] > v[j]).count()).sum()
    }

    pub fn sign(&self) -> i64 {
        if self.inversions().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Lehmer-code rank in 0..l!.
    pub fn rank(&self) -> u64 {
        let v = self.images();
        let mut r = 0u64;
        for i in 0..v.len() {
            let smaller = (i + 1..v.len()).filter(|&j| v[j] < v[i]).count() as u64;
            r = r * (v.len() - i) as u64 + smaller;
        }
        r
    }

    pub fn all(l: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..l).collect();
        fn rec(i: usize, cur: &mut Vec<usize>, out: &mut Vec<Perm>) {
            if i == cur.len() {
                out.push(Perm::from_images(cur).unwrap());
                return;
            }
            for j in i..cur.len() {
                cur.swap(i, j);
                rec(i + 1, cur, out);
                cur.swap(i, j);
            }
        }
        rec(0, &mut cur, &mut out);
        out.sort_by_key(|p| p.rank());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws() {
        let all = Perm::all(4);
        assert_eq!(all.len(), 24);
        for (r, p) in all.iter().enumerate() {
            assert_eq!(p.rank(), r as u64);
            assert!(p.compose(&p.inverse()).is_identity());
            for q in &all {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
        }
        let a = Perm::from_images(&[1, 2, 0]).unwrap();
        let b = Perm::from_images(&[0, 2, 1]).unwrap();
        assert_eq!(a.compose(&b).images(), &[1, 0, 2]);
        assert!(Perm::from_images(&[0, 0]).is_none());
    }

    #[test]
    fn descents_reduce_length() {
        for p in Perm::all(5) {
            if let Some(i) = p.first_descent() {
                let q = p.compose(&Perm::adjacent(5, i));
                assert_eq!(q.inversions() + 1, p.inversions());
            } else {
                assert!(p.is_identity());
            }
        }
    }
}
