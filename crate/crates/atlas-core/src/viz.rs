//! SVG heatmaps, CSV matrix export, and dendrogram text listings.
//!
//! Rendering is deterministic: identical inputs produce byte-identical
//! output. Every heatmap cell is a `<rect>` carrying `data-row`,
//! `data-col`, and `data-value` attributes (values at 6 decimal places),
//! so tests and downstream tools can read the numbers back out of the
//! image without pixel comparison — cells are the only rectangles in the
//! document.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::analysis::{Dendrogram, NodeRef};
use crate::corpus::Theorem;
use crate::error::{Error, Result};
use crate::metrics::SimilarityMatrix;
use crate::registry::AxiomSystem;

/// An RGB color, parsed from and formatted as `#RRGGBB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Color {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Color {
    pub const fn new(r: u8, g: u8, b: u8) -> Color {
        Color { r, g, b }
    }

    /// Linear RGB interpolation at `t` in `[0, 1]`, each channel rounded
    /// to the nearest integer.
    pub fn lerp(self, other: Color, t: f64) -> Color {
        let t = t.clamp(0.0, 1.0);
        let channel = |a: u8, b: u8| -> u8 {
            (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8
        };
        Color {
            r: channel(self.r, other.r),
            g: channel(self.g, other.g),
            b: channel(self.b, other.b),
        }
    }

    pub fn to_hex(self) -> String {
        format!("#{:02X}{:02X}{:02X}", self.r, self.g, self.b)
    }
}

impl FromStr for Color {
    type Err = Error;

    fn from_str(s: &str) -> Result<Color> {
        let hex = s
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("color '{s}' must look like '#RRGGBB'")))?;
        if hex.len() != 6 || !hex.is_ascii() {
            return Err(Error::Parse(format!(
                "color '{s}' must look like '#RRGGBB'"
            )));
        }
        let parse_pair = |range: std::ops::Range<usize>| {
            u8::from_str_radix(&hex[range], 16)
                .map_err(|_| Error::Parse(format!("color '{s}' must look like '#RRGGBB'")))
        };
        Ok(Color {
            r: parse_pair(0..2)?,
            g: parse_pair(2..4)?,
            b: parse_pair(4..6)?,
        })
    }
}

/// Rendering knobs for the heatmap renderers.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapOptions {
    /// Cell edge in pixels.
    pub cell_size: usize,
    /// Gap between cells in pixels.
    pub gutter: usize,
    /// Color at value 0.
    pub low: Color,
    /// Color at value 1.
    pub high: Color,
    /// Optional title rendered above the grid.
    pub title: Option<String>,
}

impl Default for HeatmapOptions {
    fn default() -> HeatmapOptions {
        HeatmapOptions {
            cell_size: 24,
            gutter: 4,
            low: Color::new(0xFF, 0xFF, 0xFF),
            high: Color::new(0x08, 0x30, 0x6B),
            title: None,
        }
    }
}

fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

// One grid renderer behind both heatmap entry points. `fill_values` drives
// the color ramp; `data_values` is what gets written into data-value. The
// two differ only for euclidean matrices, whose colors are normalized by
// 1/√dimension while the recorded values stay raw.
struct Grid<'a> {
    row_labels: &'a [String],
    col_labels: &'a [String],
    data_values: &'a [Vec<f64>],
    fill_values: &'a [Vec<f64>],
}

const FONT_PX: usize = 12;
// crude but deterministic width estimate for layout purposes
const CHAR_PX: usize = 7;
const PAD: usize = 10;

fn render_grid(grid: &Grid<'_>, options: &HeatmapOptions) -> String {
    let rows = grid.row_labels.len();
    let cols = grid.col_labels.len();
    let step = options.cell_size + options.gutter;

    let max_row_chars = grid
        .row_labels
        .iter()
        .map(|l| l.chars().count())
        .max()
        .unwrap_or(0);
    let max_col_chars = grid
        .col_labels
        .iter()
        .map(|l| l.chars().count())
        .max()
        .unwrap_or(0);

    let title_height = if options.title.is_some() { 28 } else { 0 };
    let row_label_width = PAD + CHAR_PX * max_row_chars + PAD;
    let col_label_height = PAD + CHAR_PX * max_col_chars + PAD;
    let x0 = row_label_width;
    let y0 = title_height + col_label_height;
    let width = x0 + cols * step - options.gutter + PAD;
    let height = y0 + rows * step - options.gutter + PAD;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">"
    );

    if let Some(title) = &options.title {
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"19\" font-size=\"14\" text-anchor=\"middle\">{}</text>",
            width / 2,
            escape_xml(title)
        );
    }

    for (c, label) in grid.col_labels.iter().enumerate() {
        let x = x0 + c * step + options.cell_size / 2 + FONT_PX / 3;
        let y = y0 - 6;
        let _ = writeln!(
            svg,
            "  <text x=\"{x}\" y=\"{y}\" font-size=\"{FONT_PX}\" text-anchor=\"start\" \
             transform=\"rotate(-90 {x} {y})\">{}</text>",
            escape_xml(label)
        );
    }

    for (r, label) in grid.row_labels.iter().enumerate() {
        let x = x0 - 6;
        let y = y0 + r * step + options.cell_size / 2 + FONT_PX / 3;
        let _ = writeln!(
            svg,
            "  <text x=\"{x}\" y=\"{y}\" font-size=\"{FONT_PX}\" text-anchor=\"end\">{}</text>",
            escape_xml(label)
        );
    }

    for r in 0..rows {
        for c in 0..cols {
            let x = x0 + c * step;
            let y = y0 + r * step;
            let fill = options.low.lerp(options.high, grid.fill_values[r][c]);
            let _ = writeln!(
                svg,
                "  <rect x=\"{x}\" y=\"{y}\" width=\"{size}\" height=\"{size}\" \
                 fill=\"{fill}\" data-row=\"{r}\" data-col=\"{c}\" data-value=\"{value}\"/>",
                size = options.cell_size,
                fill = fill.to_hex(),
                value = fmt6(grid.data_values[r][c]),
            );
        }
    }

    svg.push_str("</svg>\n");
    svg
}

/// Render theorems as heatmap rows over their system's axiom columns.
///
/// Row labels are theorem ids; column labels are `system`'s axiom keys.
pub fn render_vector_heatmap(
    theorems: &[&Theorem],
    system: &AxiomSystem,
    options: &HeatmapOptions,
) -> Result<String> {
    if theorems.is_empty() {
        return Err(Error::EmptySlice);
    }
    for t in theorems {
        if t.system() != system.id {
            return Err(Error::MixedSystems {
                expected: system.id.clone(),
                found: t.system().to_string(),
            });
        }
        if t.vector.dimension() != system.dimension() {
            return Err(Error::DimensionMismatch {
                system: system.id.clone(),
                expected: system.dimension(),
                actual: t.vector.dimension(),
            });
        }
    }

    let row_labels: Vec<String> = theorems.iter().map(|t| t.id.clone()).collect();
    let col_labels: Vec<String> = system.axioms().iter().map(|a| a.key.clone()).collect();
    let values: Vec<Vec<f64>> = theorems
        .iter()
        .map(|t| t.vector.values().to_vec())
        .collect();

    Ok(render_grid(
        &Grid {
            row_labels: &row_labels,
            col_labels: &col_labels,
            data_values: &values,
            fill_values: &values,
        },
        options,
    ))
}

/// Render a similarity matrix with theorem ids on both axes.
///
/// Cells record the raw matrix values; for euclidean matrices only the
/// color ramp is normalized by `1/√dimension` so distances land in `[0, 1]`.
pub fn render_similarity_heatmap(matrix: &SimilarityMatrix, options: &HeatmapOptions) -> String {
    let labels = matrix.labels().to_vec();
    let data_values: Vec<Vec<f64>> = matrix.values().to_vec();
    let fill_values: Vec<Vec<f64>> = if matrix.metric().is_distance() {
        let scale = 1.0 / (matrix.source_dimension() as f64).sqrt();
        data_values
            .iter()
            .map(|row| row.iter().map(|v| v * scale).collect())
            .collect()
    } else {
        data_values.clone()
    };

    render_grid(
        &Grid {
            row_labels: &labels,
            col_labels: &labels,
            data_values: &data_values,
            fill_values: &fill_values,
        },
        options,
    )
}

/// Matrix as CSV: header `id,<label1>,…`, one row per label, values at
/// 6 decimal places. Euclidean values are exported raw (no rescaling).
pub fn export_matrix_csv(matrix: &SimilarityMatrix) -> String {
    let mut out = String::new();
    out.push_str("id");
    for label in matrix.labels() {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    for (label, row) in matrix.labels().iter().zip(matrix.values()) {
        out.push_str(label);
        for &v in row {
            out.push(',');
            out.push_str(&fmt6(v));
        }
        out.push('\n');
    }
    out
}

/// Parse CSV produced by [`export_matrix_csv`] back into labels and values.
pub fn parse_matrix_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("matrix CSV is empty".into()))?;
    let mut fields = header.split(',');
    if fields.next() != Some("id") {
        return Err(Error::Parse(
            "matrix CSV header must start with 'id'".into(),
        ));
    }
    let labels: Vec<String> = fields.map(str::to_string).collect();
    if labels.is_empty() {
        return Err(Error::Parse("matrix CSV header names no columns".into()));
    }

    let mut values = Vec::with_capacity(labels.len());
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let row_label = fields.next().unwrap_or_default();
        if row_label != labels[i] {
            return Err(Error::Parse(format!(
                "matrix CSV row {i} is labeled '{row_label}' but the header says '{}'",
                labels.get(i).map(String::as_str).unwrap_or("<none>")
            )));
        }
        let row: Vec<f64> = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("matrix CSV row {i}: bad number '{f}'")))
            })
            .collect::<Result<_>>()?;
        if row.len() != labels.len() {
            return Err(Error::Parse(format!(
                "matrix CSV row {i} has {} values, expected {}",
                row.len(),
                labels.len()
            )));
        }
        values.push(row);
    }
    if values.len() != labels.len() {
        return Err(Error::Parse(format!(
            "matrix CSV has {} rows, expected {}",
            values.len(),
            labels.len()
        )));
    }
    Ok((labels, values))
}

/// Dendrogram as stable text: `leaf <id>` per input theorem, then
/// `merge <left> <right> @ <height>` per step, where merged nodes are
/// referenced as `#<merge-index>`.
pub fn render_dendrogram_text(dendrogram: &Dendrogram) -> String {
    let node_name = |node: NodeRef| match node {
        NodeRef::Leaf(i) => dendrogram.leaves()[i].clone(),
        NodeRef::Internal(m) => format!("#{m}"),
    };

    let mut out = String::new();
    for leaf in dendrogram.leaves() {
        let _ = writeln!(out, "leaf {leaf}");
    }
    for merge in dendrogram.merges() {
        let _ = writeln!(
            out,
            "merge {} {} @ {}",
            node_name(merge.left),
            node_name(merge.right),
            fmt6(merge.height)
        );
    }
    out
}
