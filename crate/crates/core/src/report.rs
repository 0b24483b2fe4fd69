//! Aggregated analysis of one frame, in machine- and human-readable form.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::frame::{FrameFile, KripkeFrame};
use crate::ideal::{self, Binomial};
use crate::semantics::{RangeSet, Valuation};
use crate::Caps;

/// Options for [`analyze`].
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    /// Transpose the frame before analysing it.
    pub reverse: bool,
    pub caps: Caps,
}

/// Everything the `analyze` command reports about one frame.
///
/// The `frame` field holds the frame that was actually analysed (after an
/// optional transposition), so feeding the emitted JSON back through the
/// analysis reproduces the report. Sections whose enumeration cap is exceeded
/// are reported as `null` instead of failing the whole run.
#[derive(Debug, Clone, Serialize)]
pub struct FrameReport {
    pub frame: FrameFile,
    pub world_count: usize,
    pub edge_count: usize,
    pub necessity_isomorphism: bool,
    pub partitioning: bool,
    pub kernel_basis: Vec<Vec<i64>>,
    pub toric_basis: Vec<Binomial>,
    pub generators: Option<GeneratorSection>,
    pub range: Option<RangeSection>,
    pub tame: Option<TameSection>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorSection {
    pub boolean_relation_count: usize,
    pub class_binomial_count: usize,
    pub class_binomials: Vec<Binomial>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RangeSection {
    pub size: usize,
    pub points: RangeSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct TameSection {
    pub tame: bool,
    pub toric_point_count: usize,
    pub witness: Option<Valuation>,
}

/// Runs every analysis whose cap permits it and collects the results.
pub fn analyze(frame: &KripkeFrame, options: &AnalyzeOptions) -> Result<FrameReport> {
    let started = Instant::now();
    let frame = if options.reverse {
        frame.reverse()
    } else {
        frame.clone()
    };
    let caps = options.caps;
    let k = frame.world_count();

    let kernel = ideal::frame_kernel(&frame);
    let generators = if k <= caps.squarefree {
        let set = ideal::ideal_generators_with(&frame, &caps)?;
        Some(GeneratorSection {
            boolean_relation_count: set.boolean_count,
            class_binomial_count: set.class_part.len(),
            class_binomials: set.class_part,
        })
    } else {
        None
    };
    let range = if k <= caps.points {
        let points = frame.necessity_range_with(&caps)?;
        Some(RangeSection {
            size: points.len(),
            points,
        })
    } else {
        None
    };
    let tame = if k <= caps.feasibility && k <= caps.points {
        let verdict = ideal::is_tame_with(&frame, &caps)?;
        Some(TameSection {
            tame: verdict.is_tame,
            toric_point_count: verdict.j_points.len(),
            witness: verdict.witness,
        })
    } else {
        None
    };

    Ok(FrameReport {
        world_count: k,
        edge_count: frame.edge_count(),
        necessity_isomorphism: frame.necessity_isomorphism(),
        partitioning: frame.is_partitioning(),
        kernel_basis: kernel.to_i64_rows()?,
        toric_basis: ideal::toric_basis_binomials(&frame),
        generators,
        range,
        tame,
        frame: frame.to_file(),
        elapsed: started.elapsed(),
    })
}

impl FrameReport {
    /// Deterministic pretty JSON; timing is deliberately not part of it.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(&mut out, format!("worlds: {}", self.world_count));
        line(&mut out, format!("edges: {}", self.edge_count));
        line(
            &mut out,
            format!("necessity is isomorphism: {}", self.necessity_isomorphism),
        );
        line(&mut out, format!("partitioning: {}", self.partitioning));
        line(
            &mut out,
            format!("kernel basis (rank {}):", self.kernel_basis.len()),
        );
        for row in &self.kernel_basis {
            line(&mut out, format!("  {row:?}"));
        }
        line(
            &mut out,
            format!("toric basis binomials ({}):", self.toric_basis.len()),
        );
        for b in &self.toric_basis {
            line(&mut out, format!("  {b}"));
        }
        match &self.generators {
            Some(g) => {
                line(
                    &mut out,
                    format!(
                        "boolean relations: {} implicit z_w^2 - z_w",
                        g.boolean_relation_count
                    ),
                );
                line(
                    &mut out,
                    format!("class binomials ({}):", g.class_binomial_count),
                );
                for b in &g.class_binomials {
                    line(&mut out, format!("  {b}"));
                }
            }
            None => line(&mut out, "generators: skipped (cap exceeded)".to_string()),
        }
        match &self.range {
            Some(r) => {
                line(&mut out, format!("necessity range ({} points):", r.size));
                for p in r.points.iter() {
                    line(&mut out, format!("  {p}"));
                }
            }
            None => line(
                &mut out,
                "necessity range: skipped (cap exceeded)".to_string(),
            ),
        }
        match &self.tame {
            Some(t) => {
                let witness = match &t.witness {
                    Some(w) => format!(" (witness {w})"),
                    None => String::new(),
                };
                line(
                    &mut out,
                    format!(
                        "tame: {}{witness} ({} toric points)",
                        t.tame, t.toric_point_count
                    ),
                );
            }
            None => line(&mut out, "tame: skipped (cap exceeded)".to_string()),
        }
        line(
            &mut out,
            format!("elapsed: {} ms", self.elapsed.as_millis()),
        );
        out
    }
}
