//! Hole-type labels, count/norm tables and diagram plots.

use std::fmt::Write as _;

use serde::Serialize;

use crate::persistence::{Dot, PersistenceDiagram, Subdiagram};
use crate::time::{fmt_fixed, to_f64, Rational};

/// Dimension of the hole in a time slice that a class records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HoleType {
    Gap,
    Tunnel,
    Void,
}

impl HoleType {
    pub const ALL: [HoleType; 3] = [HoleType::Gap, HoleType::Tunnel, HoleType::Void];

    pub fn as_str(self) -> &'static str {
        match self {
            HoleType::Gap => "gap",
            HoleType::Tunnel => "tunnel",
            HoleType::Void => "void",
        }
    }

    fn from_dim(p: usize) -> Option<Self> {
        HoleType::ALL.get(p).copied()
    }
}

/// Classes born and dead on the same side keep the hole's dimension; classes
/// whose birth and death straddle the sweep (or lie in its second half) are
/// one dimension higher than the hole they record. `None` marks a class
/// dimension that cannot arise in `ambient_dim` dimensions.
pub fn hole_type(dot: &Dot, ambient_dim: usize) -> Option<HoleType> {
    let p = dot.dim;
    match dot.subdiagram {
        Subdiagram::Ord | Subdiagram::Hor if p < ambient_dim => HoleType::from_dim(p),
        Subdiagram::Ver | Subdiagram::Rel if (1..=ambient_dim).contains(&p) => HoleType::from_dim(p - 1),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Entry {
    pub count: usize,
    pub norm: Rational,
}

impl Entry {
    fn add(&mut self, other: Entry) {
        self.count += other.count;
        self.norm += other.norm;
    }
}

/// Counts and 1-norms per hole type and subdiagram.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SummaryTable {
    /// Indexed `[hole type][subdiagram]`.
    pub cells: [[Entry; 4]; 3],
    /// Dots without a hole type.
    pub artifacts: Entry,
}

impl SummaryTable {
    pub fn get(&self, hole: HoleType, sub: Subdiagram) -> Entry {
        self.cells[hole as usize][sub as usize]
    }

    pub fn row(&self, hole: HoleType) -> Entry {
        let mut e = Entry::default();
        for x in &self.cells[hole as usize] {
            e.add(*x);
        }
        e
    }

    pub fn column(&self, sub: Subdiagram) -> Entry {
        let mut e = Entry::default();
        for row in &self.cells {
            e.add(row[sub as usize]);
        }
        e
    }

    pub fn total(&self) -> Entry {
        let mut e = self.artifacts;
        for h in HoleType::ALL {
            e.add(self.row(h));
        }
        e
    }

    /// CSV rows `hole_type,subdiagram,count,norm` including `sum` marginals;
    /// norms are shown with two decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("hole_type,subdiagram,count,norm\n");
        let mut line = |h: &str, s: &str, e: Entry| {
            let _ = writeln!(out, "{h},{s},{},{}", e.count, fmt_fixed(&e.norm, 2));
        };
        for h in HoleType::ALL {
            for s in Subdiagram::ALL {
                line(h.as_str(), s.as_str(), self.get(h, s));
            }
            line(h.as_str(), "sum", self.row(h));
        }
        for s in Subdiagram::ALL {
            line("sum", s.as_str(), self.column(s));
        }
        line("sum", "sum", self.total());
        if self.artifacts.count > 0 {
            line("artifact", "sum", self.artifacts);
        }
        out
    }
}

/// Counts and norms of the non-trivial dots.
pub fn summarize(diagram: &PersistenceDiagram) -> SummaryTable {
    let mut t = SummaryTable::default();
    for d in diagram.visible(Rational::from_integer(0)) {
        let e = Entry { count: 1, norm: d.persistence() };
        match hole_type(d, diagram.ambient_dim) {
            Some(h) => t.cells[h as usize][d.subdiagram as usize].add(e),
            None => t.artifacts.add(e),
        }
    }
    t
}

#[derive(Clone, Debug, Default)]
pub struct RenderOptions {
    pub title: Option<String>,
    pub min_persistence: Rational,
}

const PANEL: f64 = 200.0;
const MARGIN: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn glyph(dim: usize, x: f64, y: f64) -> String {
    let r = 4.0;
    match dim {
        0 => format!(r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" class="d0"/>"#),
        1 => format!(
            r#"<rect x="{:.2}" y="{:.2}" width="{}" height="{}" class="d1"/>"#,
            x - r,
            y - r,
            2.0 * r,
            2.0 * r
        ),
        2 => format!(
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" class="d2"/>"#,
            x,
            y - r,
            x - r,
            y + r,
            x + r,
            y + r
        ),
        _ => format!(
            r#"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" class="d3"/>"#,
            x,
            y - r,
            x + r,
            y,
            x,
            y + r,
            x - r,
            y
        ),
    }
}

/// Four side-by-side panels (Ord, Hor, Ver, Rel) with birth on the
/// horizontal and death on the vertical axis; glyph shape encodes dimension.
pub fn render_diagram(diagram: &PersistenceDiagram, opts: &RenderOptions) -> String {
    let width = 4.0 * (PANEL + MARGIN) + MARGIN;
    let height = PANEL + 2.5 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    s.push_str(
        "<style>text{font-family:sans-serif;font-size:12px}.axis{stroke:#000;fill:none}\
         .diag{stroke:#999;stroke-dasharray:4 3}.d0{fill:#c0392b}.d1{fill:#2471a3}\
         .d2{fill:#229954}.d3{fill:#7d3c98}</style>\n",
    );
    if let Some(t) = &opts.title {
        let _ = writeln!(s, r#"<text x="{MARGIN}" y="16">{}</text>"#, escape(t));
    }
    for (k, sub) in Subdiagram::ALL.into_iter().enumerate() {
        let x0 = MARGIN + k as f64 * (PANEL + MARGIN);
        let y0 = 1.5 * MARGIN;
        let _ = writeln!(s, r#"<g class="panel" id="{sub}">"#);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{sub}</text>"#, x0, y0 - 6.0);
        let _ = writeln!(s, r#"<rect class="axis" x="{x0}" y="{y0}" width="{PANEL}" height="{PANEL}"/>"#);
        let _ = writeln!(
            s,
            r#"<line class="diag" x1="{x0}" y1="{:.2}" x2="{:.2}" y2="{y0}"/>"#,
            y0 + PANEL,
            x0 + PANEL
        );
        let _ = writeln!(s, r#"<text x="{x0}" y="{:.2}">0</text>"#, y0 + PANEL + 14.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">1</text>"#, x0 + PANEL - 6.0, y0 + PANEL + 14.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">birth</text>"#, x0 + PANEL / 2.0 - 14.0, y0 + PANEL + 26.0);
        for d in diagram.visible(opts.min_persistence).filter(|d| d.subdiagram == sub) {
            let x = x0 + to_f64(&d.birth) * PANEL;
            let y = y0 + (1.0 - to_f64(&d.death)) * PANEL;
            s.push_str(&glyph(d.dim, x, y));
            s.push('\n');
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::CellId;
    use crate::persistence::Flavor;

    fn dot(dim: usize, sub: Subdiagram, b: (i128, i128), d: (i128, i128)) -> Dot {
        Dot {
            dim,
            subdiagram: sub,
            birth: Rational::new(b.0, b.1),
            death: Rational::new(d.0, d.1),
            creator: CellId(0),
            destroyer: CellId(0),
        }
    }

    fn diagram(dots: Vec<Dot>, d: usize) -> PersistenceDiagram {
        PersistenceDiagram::new(dots, Flavor::Extended, d, String::new())
    }

    #[test]
    fn hole_types_follow_the_twelve_cases() {
        use Subdiagram::*;
        assert_eq!(hole_type(&dot(1, Ver, (1, 2), (0, 1)), 3), Some(HoleType::Gap));
        assert_eq!(hole_type(&dot(0, Ord, (0, 1), (1, 2)), 3), Some(HoleType::Gap));
        assert_eq!(hole_type(&dot(2, Rel, (0, 1), (1, 2)), 3), Some(HoleType::Tunnel));
        assert_eq!(hole_type(&dot(2, Hor, (0, 1), (1, 1)), 3), Some(HoleType::Void));
        assert_eq!(hole_type(&dot(3, Rel, (0, 1), (1, 1)), 3), Some(HoleType::Void));
        // the four empty slots in the plane
        assert_eq!(hole_type(&dot(2, Ord, (0, 1), (1, 2)), 2), None);
        assert_eq!(hole_type(&dot(2, Hor, (0, 1), (1, 2)), 2), None);
        assert_eq!(hole_type(&dot(0, Ver, (1, 2), (0, 1)), 2), None);
        assert_eq!(hole_type(&dot(0, Rel, (0, 1), (1, 2)), 2), None);
        // table is total on the remaining twelve slots in space
        let mut labelled = 0;
        for sub in Subdiagram::ALL {
            for p in 0..=3 {
                labelled += hole_type(&dot(p, sub, (0, 1), (1, 1)), 3).is_some() as usize;
            }
        }
        assert_eq!(labelled, 12);
    }

    #[test]
    fn single_component_summary() {
        let t = summarize(&diagram(vec![dot(0, Subdiagram::Hor, (0, 1), (1, 1))], 3));
        assert_eq!(t.get(HoleType::Gap, Subdiagram::Hor), Entry { count: 1, norm: Rational::from_integer(1) });
        assert_eq!(t.total().count, 1);
        assert!(t.to_csv().contains("gap,Hor,1,1.00\n"));
        assert!(t.to_csv().contains("tunnel,Ord,0,0.00\n"));
    }

    #[test]
    fn empty_summary_is_zero() {
        let t = summarize(&diagram(vec![], 2));
        assert_eq!(t, SummaryTable::default());
    }

    #[test]
    fn norms_add_exactly() {
        let t = summarize(&diagram(
            vec![
                dot(1, Subdiagram::Ord, (2, 10), (5, 10)),
                dot(1, Subdiagram::Ord, (1, 10), (4, 10)),
            ],
            2,
        ));
        let e = t.get(HoleType::Tunnel, Subdiagram::Ord);
        assert_eq!(e, Entry { count: 2, norm: Rational::new(3, 5) });
        assert!(t.to_csv().contains("tunnel,Ord,2,0.60\n"));
    }

    #[test]
    fn rendering_is_deterministic_and_places_glyphs() {
        let empty = render_diagram(&diagram(vec![], 2), &RenderOptions::default());
        assert_eq!(empty.matches(r#"class="panel""#).count(), 4);
        assert!(!empty.contains("<circle"));
        let one = diagram(vec![dot(0, Subdiagram::Hor, (0, 1), (1, 1))], 2);
        let a = render_diagram(&one, &RenderOptions::default());
        assert_eq!(a, render_diagram(&one, &RenderOptions::default()));
        assert_eq!(a.matches("<circle").count(), 1);
        // Hor panel origin is at x = 40 + 240, y = 60; death 1 is the top edge
        assert!(a.contains(r#"<circle cx="280.00" cy="60.00""#));
    }
}
