//! Category taxonomy: a seeded, prefix-stable map from category id to the
//! shape parameters that define the category.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// Largest category count representable in a 16-bit label mask.
pub const MAX_CATEGORIES: u32 = 65_535;

/// Shape parameters of one semantic category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySpec {
    pub category_id: u32,
    pub vertex_count: u32,
    /// Radius in pixels on the reference canvas.
    pub base_radius: f64,
    /// Closed interval a per-instance resize factor is drawn from.
    pub resize_factor_range: (f64, f64),
    /// Radial perturbation, as a fraction of the radius.
    pub noise_amplitude: f64,
    /// Noise cycles per revolution.
    pub noise_frequency: u32,
}

impl CategorySpec {
    /// Same category with the radius multiplied by `factor` (canvas scaling).
    pub fn scaled(&self, factor: f64) -> CategorySpec {
        CategorySpec {
            base_radius: self.base_radius * factor,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.resize_factor_range;
        if self.vertex_count < 3
            || !(self.base_radius > 0.0)
            || !(lo > 0.0 && lo <= hi)
            || !(0.0..1.0).contains(&self.noise_amplitude)
            || self.noise_frequency == 0
        {
            return Err(Error::malformed(
                "category spec",
                format!("{self:?} violates parameter bounds"),
            ));
        }
        Ok(())
    }
}

/// Parameter grids category specs are drawn from.
///
/// Every draw comes from a finite grid (integer pixels for the radius, whole
/// percent for the noise amplitude), so spec equality is exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyRanges {
    pub vertex_count: (u32, u32),
    /// Integer pixel radii on the reference canvas.
    pub base_radius: (u32, u32),
    pub resize_factor: (f64, f64),
    /// Noise amplitude grid in percent of the radius.
    pub noise_amplitude_percent: (u32, u32),
    pub noise_frequency: (u32, u32),
    /// Canvas side the radii are expressed for.
    pub reference_canvas: u32,
}

impl Default for TaxonomyRanges {
    fn default() -> Self {
        Self {
            vertex_count: (3, 32),
            base_radius: (16, 96),
            resize_factor: (0.75, 1.5),
            noise_amplitude_percent: (0, 40),
            noise_frequency: (1, 8),
            reference_canvas: 512,
        }
    }
}

impl TaxonomyRanges {
    pub fn validate(&self) -> Result<()> {
        let ordered = |name: &str, (lo, hi): (u32, u32)| {
            if lo > hi {
                Err(Error::invalid(format!("{name} range {lo}..={hi} is empty")))
            } else {
                Ok(())
            }
        };
        ordered("vertex_count", self.vertex_count)?;
        ordered("base_radius", self.base_radius)?;
        ordered("noise_amplitude_percent", self.noise_amplitude_percent)?;
        ordered("noise_frequency", self.noise_frequency)?;
        if self.vertex_count.0 < 3 {
            return Err(Error::invalid("vertex_count must be at least 3"));
        }
        if self.base_radius.0 == 0 {
            return Err(Error::invalid("base_radius must be positive"));
        }
        if self.noise_amplitude_percent.1 >= 100 {
            return Err(Error::invalid(
                "noise amplitude must stay below 100% to keep radii positive",
            ));
        }
        if self.noise_frequency.0 == 0 {
            return Err(Error::invalid("noise_frequency must be positive"));
        }
        let (lo, hi) = self.resize_factor;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::invalid(format!(
                "resize_factor range [{lo}, {hi}] must satisfy 0 < lo <= hi"
            )));
        }
        if self.reference_canvas == 0 {
            return Err(Error::invalid("reference_canvas must be positive"));
        }
        Ok(())
    }

    /// Number of distinct specs the grids can express.
    pub fn capacity(&self) -> u64 {
        let span = |(lo, hi): (u32, u32)| u64::from(hi - lo) + 1;
        span(self.vertex_count)
            * span(self.base_radius)
            * span(self.noise_amplitude_percent)
            * span(self.noise_frequency)
    }
}

/// Immutable table of `C` category specs; index 0 holds category 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryTable {
    pub taxonomy_seed: u64,
    pub num_categories: u32,
    specs: Vec<CategorySpec>,
}

type GridKey = (u32, u32, u32, u32);

fn draw_spec<R: Rng + ?Sized>(
    category_id: u32,
    ranges: &TaxonomyRanges,
    rng: &mut R,
) -> (GridKey, CategorySpec) {
    let vertices = rng.gen_range(ranges.vertex_count.0..=ranges.vertex_count.1);
    let radius = rng.gen_range(ranges.base_radius.0..=ranges.base_radius.1);
    let amp = rng.gen_range(ranges.noise_amplitude_percent.0..=ranges.noise_amplitude_percent.1);
    let freq = rng.gen_range(ranges.noise_frequency.0..=ranges.noise_frequency.1);
    let spec = CategorySpec {
        category_id,
        vertex_count: vertices,
        base_radius: f64::from(radius),
        resize_factor_range: ranges.resize_factor,
        noise_amplitude: f64::from(amp) / 100.0,
        noise_frequency: freq,
    };
    ((vertices, radius, amp, freq), spec)
}

/// Builds the table for `num_categories` categories with the default grids.
pub fn build_taxonomy(num_categories: u32, taxonomy_seed: u64) -> Result<CategoryTable> {
    build_taxonomy_with(num_categories, taxonomy_seed, &TaxonomyRanges::default())
}

/// Builds the table for `num_categories` categories.
///
/// Category `c` is drawn from the stream `derive(derive(seed, c), attempt)`;
/// a draw that collides with an earlier category is retried with the next
/// attempt counter. Category `c` therefore depends only on categories `< c`,
/// which makes every table a prefix of any larger table with the same seed.
pub fn build_taxonomy_with(
    num_categories: u32,
    taxonomy_seed: u64,
    ranges: &TaxonomyRanges,
) -> Result<CategoryTable> {
    if num_categories == 0 || num_categories > MAX_CATEGORIES {
        return Err(Error::invalid(format!(
            "number of categories must be in 1..={MAX_CATEGORIES}, got {num_categories}"
        )));
    }
    ranges.validate()?;
    if ranges.capacity() < u64::from(num_categories) {
        return Err(Error::invalid(format!(
            "parameter grids hold {} distinct categories, {num_categories} requested",
            ranges.capacity()
        )));
    }

    let mut taken: HashSet<GridKey> = HashSet::with_capacity(num_categories as usize);
    let mut specs = Vec::with_capacity(num_categories as usize);
    for c in 1..=num_categories {
        let category_seed = seed::derive(taxonomy_seed, u64::from(c));
        let mut attempt = 0u64;
        loop {
            let mut rng = seed::stream(seed::derive(category_seed, attempt));
            let (key, spec) = draw_spec(c, ranges, &mut rng);
            if taken.insert(key) {
                specs.push(spec);
                break;
            }
            attempt += 1;
        }
    }
    Ok(CategoryTable {
        taxonomy_seed,
        num_categories,
        specs,
    })
}

impl CategoryTable {
    /// Spec of category `c` (1-based). Background (0) has no spec.
    pub fn lookup(&self, c: u32) -> Result<&CategorySpec> {
        if c == 0 || c > self.num_categories {
            return Err(Error::CategoryOutOfRange {
                category: c,
                num_categories: self.num_categories,
            });
        }
        Ok(&self.specs[(c - 1) as usize])
    }

    pub fn specs(&self) -> &[CategorySpec] {
        &self.specs
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    /// One line per category:
    /// `id vertex_count base_radius resize_lo resize_hi noise_amplitude noise_frequency`.
    pub fn to_lines(&self) -> Vec<String> {
        self.specs
            .iter()
            .map(|s| {
                let mut line = String::new();
                let _ = write!(
                    line,
                    "{} {} {} {} {} {} {}",
                    s.category_id,
                    s.vertex_count,
                    s.base_radius,
                    s.resize_factor_range.0,
                    s.resize_factor_range.1,
                    s.noise_amplitude,
                    s.noise_frequency
                );
                line
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in self.to_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`CategoryTable::to_lines`] back into a table.
    pub fn from_lines<S: AsRef<str>>(taxonomy_seed: u64, lines: &[S]) -> Result<CategoryTable> {
        let mut specs = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            let line = line.as_ref();
            let bad =
                |detail: String| Error::malformed("taxonomy line", format!("{}: {detail}", i + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 7 {
                return Err(bad(format!("expected 7 fields, got {}", fields.len())));
            }
            let int = |k: usize| fields[k].parse::<u32>().map_err(|e| bad(e.to_string()));
            let float = |k: usize| fields[k].parse::<f64>().map_err(|e| bad(e.to_string()));
            let spec = CategorySpec {
                category_id: int(0)?,
                vertex_count: int(1)?,
                base_radius: float(2)?,
                resize_factor_range: (float(3)?, float(4)?),
                noise_amplitude: float(5)?,
                noise_frequency: int(6)?,
            };
            if spec.category_id as usize != i + 1 {
                return Err(bad(format!(
                    "category id {} out of order",
                    spec.category_id
                )));
            }
            spec.validate()?;
            specs.push(spec);
        }
        if specs.is_empty() || specs.len() > MAX_CATEGORIES as usize {
            return Err(Error::malformed(
                "taxonomy",
                format!("{} categories", specs.len()),
            ));
        }
        Ok(CategoryTable {
            taxonomy_seed,
            num_categories: specs.len() as u32,
            specs,
        })
    }
}
