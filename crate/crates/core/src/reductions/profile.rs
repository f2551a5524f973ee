use crate::error::Result;
use crate::geom::ColorId;
use crate::oracle::{hits, Instance, Query, QueryUniverse};
use rand::Rng;

/// A set of color ids as a bitmask.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColorSet {
    bits: Vec<u64>,
    len: usize,
}

impl ColorSet {
    pub fn full(num_colors: usize) -> Self {
        let mut s = Self { bits: vec![0; num_colors.div_ceil(64)], len: 0 };
        (0..num_colors).for_each(|c| s.insert(ColorId(c as u32)));
        s
    }

    pub fn empty(num_colors: usize) -> Self {
        Self { bits: vec![0; num_colors.div_ceil(64)], len: 0 }
    }

    pub fn insert(&mut self, c: ColorId) {
        let (w, b) = (c.index() / 64, c.index() % 64);
        if self.bits[w] >> b & 1 == 0 {
            self.bits[w] |= 1 << b;
            self.len += 1;
        }
    }

    pub fn contains(&self, c: ColorId) -> bool {
        self.bits.get(c.index() / 64).is_some_and(|w| w >> (c.index() % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }
}

/// Each of `num_colors` colors kept independently with probability `m`.
pub fn sample_colors(num_colors: usize, m: f64, rng: &mut impl Rng) -> ColorSet {
    let mut s = ColorSet::empty(num_colors);
    for c in 0..num_colors {
        if m >= 1.0 || rng.gen_bool(m.max(0.0)) {
            s.insert(ColorId(c as u32));
        }
    }
    s
}

/// Colors present in every query of a universe, for verifying samples.
#[derive(Clone, Debug)]
pub struct ColorProfile {
    universe: QueryUniverse,
    num_colors: usize,
    /// Objects per color.
    sizes: Vec<usize>,
    words: usize,
    presence: Vec<u64>,
    counts: Vec<u32>,
}

impl ColorProfile {
    pub fn build(inst: &Instance, universe: QueryUniverse) -> Result<Self> {
        let num_colors = inst.num_colors();
        let mut sizes = vec![0usize; num_colors];
        (0..inst.len()).filter_map(|i| inst.color_of(i)).for_each(|c| sizes[c.index()] += 1);
        let words = num_colors.div_ceil(64).max(1);
        let mut presence = vec![0u64; words * universe.len()];
        let mut counts = Vec::with_capacity(universe.len());
        for (i, q) in universe.iter().enumerate() {
            let row = &mut presence[i * words..(i + 1) * words];
            let mut k = 0;
            for c in hits(inst, &q)?.into_iter().filter_map(|j| inst.color_of(j)) {
                let (w, b) = (c.index() / 64, c.index() % 64);
                if row[w] >> b & 1 == 0 {
                    row[w] |= 1 << b;
                    k += 1;
                }
            }
            counts.push(k);
        }
        Ok(Self { universe, num_colors, sizes, words, presence, counts })
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn universe(&self) -> &QueryUniverse {
        &self.universe
    }

    pub fn is_exhaustive(&self) -> bool {
        self.universe.is_exhaustive()
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn num_objects(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn query(&self, i: usize) -> Query {
        self.universe.get(i)
    }

    /// Exact colored count of query `i`.
    pub fn k(&self, i: usize) -> u32 {
        self.counts[i]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Colors of `set` present in query `i`.
    pub fn count_in(&self, i: usize, set: &ColorSet) -> u32 {
        self.presence[i * self.words..(i + 1) * self.words]
            .iter()
            .zip(set.words())
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Objects whose color is in `set`.
    pub fn objects_in(&self, set: &ColorSet) -> usize {
        self.sizes.iter().enumerate().filter(|(c, _)| set.contains(ColorId(*c as u32))).map(|(_, s)| s).sum()
    }
}
