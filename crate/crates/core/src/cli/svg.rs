//! Static SVG figures. One square panel per star, laid out on a grid; layers
//! are drawn in the order star regions, slits, skeleton edges, labels.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::geometry::{CellMap, Window};
use crate::numerics::C64;
use crate::skeleton::{foot_key, ram_cycles, Skeleton};

const PANEL: f64 = 200.0;
const GAP: f64 = 40.0;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
];

fn color(id: usize) -> &'static str {
    PALETTE[id % PALETTE.len()]
}

struct Layout {
    window: Window,
    cols: usize,
    /// Panel slot of each star id.
    slot: BTreeMap<usize, usize>,
}

impl Layout {
    fn new(stars: &[usize], window: Window) -> Layout {
        let cols = (stars.len() as f64).sqrt().ceil().max(1.0) as usize;
        Layout {
            window,
            cols,
            slot: stars.iter().enumerate().map(|(i, &s)| (s, i)).collect(),
        }
    }

    fn size(&self) -> (f64, f64) {
        let rows = self.slot.len().div_ceil(self.cols).max(1);
        (
            GAP + self.cols as f64 * (PANEL + GAP),
            GAP + rows as f64 * (PANEL + GAP),
        )
    }

    fn origin(&self, star: usize) -> (f64, f64) {
        let i = self.slot[&star];
        (
            GAP + (i % self.cols) as f64 * (PANEL + GAP),
            GAP + (i / self.cols) as f64 * (PANEL + GAP),
        )
    }

    fn center(&self, star: usize) -> (f64, f64) {
        let (x, y) = self.origin(star);
        (x + PANEL / 2.0, y + PANEL / 2.0)
    }

    fn map(&self, star: usize, z: C64) -> (f64, f64) {
        let (x, y) = self.origin(star);
        let w = &self.window;
        (
            x + (z.re - w.min.re) / w.width() * PANEL,
            y + (w.max.im - z.im) / w.height() * PANEL,
        )
    }
}

/// Ramification-point id of every edge: the index of its chain, or of its
/// foot when the chains cannot be formed.
fn edge_ids(g: &Skeleton) -> Vec<usize> {
    let mut ids = vec![0; g.edges.len()];
    match ram_cycles(g) {
        Ok(ram) => {
            for (k, r) in ram.iter().enumerate() {
                for &e in &r.edge_cycle {
                    ids[e] = k;
                }
            }
        }
        Err(_) => {
            let mut feet: Vec<(u64, u64)> = g.edges.iter().map(|e| foot_key(e.foot)).collect();
            feet.sort_unstable();
            feet.dedup();
            for (i, e) in g.edges.iter().enumerate() {
                ids[i] = feet.binary_search(&foot_key(e.foot)).unwrap_or(0);
            }
        }
    }
    ids
}

fn skeleton_window(g: &Skeleton) -> Window {
    let reach = g.edges.iter().map(|e| (e.foot - g.z0).norm()).fold(1.0, f64::max);
    Window::around(g.z0, 1.25 * reach)
}

fn header(out: &mut String, layout: &Layout) {
    let (w, h) = layout.size();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    out.push_str("<defs>\n");
    for &star in layout.slot.keys() {
        let (x, y) = layout.origin(star);
        writeln!(
            out,
            r#"<clipPath id="clip{star}"><rect x="{x:.3}" y="{y:.3}" width="{PANEL:.3}" height="{PANEL:.3}"/></clipPath>"#
        )
        .unwrap();
    }
    out.push_str("</defs>\n");
}

fn plain_regions(out: &mut String, layout: &Layout, base: usize) {
    out.push_str("<g id=\"stars\">\n");
    for &star in layout.slot.keys() {
        let (x, y) = layout.origin(star);
        let fill = if star == base { "#eef3fb" } else { "#f4f4f4" };
        writeln!(
            out,
            r##"<rect x="{x:.3}" y="{y:.3}" width="{PANEL:.3}" height="{PANEL:.3}" fill="{fill}" stroke="#999"/>"##
        )
        .unwrap();
    }
    out.push_str("</g>\n");
}

fn slits(out: &mut String, layout: &Layout, g: &Skeleton, ids: &[usize]) {
    out.push_str("<g id=\"slits\" stroke-width=\"2\">\n");
    let far = 4.0 * layout.window.diameter();
    for (v, incident) in g.adjacency() {
        if !layout.slot.contains_key(&v) {
            continue;
        }
        let mut seen = Vec::new();
        for (e, _) in incident {
            let edge = &g.edges[e];
            let key = foot_key(edge.foot);
            if seen.contains(&key) {
                continue;
            }
            seen.push(key);
            let dir = edge.foot - g.z0;
            let end = edge.foot + dir / dir.norm().max(f64::MIN_POSITIVE) * far;
            let (x1, y1) = layout.map(v, edge.foot);
            let (x2, y2) = layout.map(v, end);
            writeln!(
                out,
                r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{}" clip-path="url(#clip{v})"/>"#,
                color(ids[e])
            )
            .unwrap();
            writeln!(
                out,
                r#"<circle cx="{x1:.3}" cy="{y1:.3}" r="3" fill="{}"/>"#,
                color(ids[e])
            )
            .unwrap();
        }
    }
    out.push_str("</g>\n");
}

fn edges(out: &mut String, layout: &Layout, g: &Skeleton, ids: &[usize]) {
    out.push_str("<g id=\"edges\" fill=\"none\" stroke-width=\"1.5\" stroke-opacity=\"0.8\">\n");
    let mut parallel: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        if e.u == e.v || !layout.slot.contains_key(&e.u) || !layout.slot.contains_key(&e.v) {
            continue;
        }
        let pair = (e.u.min(e.v), e.u.max(e.v));
        let k = parallel.entry(pair).or_insert(0);
        // Alternate sides and grow the bow so parallel edges stay apart.
        let bow = 25.0 * (1 + *k / 2) as f64 * if (*k).is_multiple_of(2) { 1.0 } else { -1.0 };
        *k += 1;
        let (x1, y1) = layout.center(pair.0);
        let (x2, y2) = layout.center(pair.1);
        let (dx, dy) = (x2 - x1, y2 - y1);
        let len = (dx * dx + dy * dy).sqrt().max(1.0);
        let (cx, cy) = ((x1 + x2) / 2.0 - dy / len * bow, (y1 + y2) / 2.0 + dx / len * bow);
        writeln!(
            out,
            r#"<path d="M {x1:.3} {y1:.3} Q {cx:.3} {cy:.3} {x2:.3} {y2:.3}" stroke="{}"><title>edge {i}: {} {}{} {}{}</title></path>"#,
            color(ids[i]),
            e.foot,
            e.u,
            e.u_side.symbol(),
            e.v,
            e.v_side.symbol()
        )
        .unwrap();
    }
    out.push_str("</g>\n");
}

fn labels(out: &mut String, layout: &Layout, g: &Skeleton) {
    out.push_str("<g id=\"labels\">\n");
    for &star in layout.slot.keys() {
        let (x, y) = layout.origin(star);
        let tag = if star == g.base { " (base)" } else { "" };
        writeln!(out, r#"<text x="{:.3}" y="{:.3}">star {star}{tag}</text>"#, x, y - 6.0).unwrap();
        let (zx, zy) = layout.map(star, g.z0);
        writeln!(out, r#"<circle cx="{zx:.3}" cy="{zy:.3}" r="2.5" fill="black"/>"#).unwrap();
    }
    out.push_str("</g>\n");
}

/// Stars as slit planes, with the skeleton drawn between panel centers.
pub fn skeleton_svg(g: &Skeleton) -> String {
    let mut stars = g.vertices.clone();
    stars.sort_unstable();
    let layout = Layout::new(&stars, skeleton_window(g));
    let ids = edge_ids(g);
    let mut out = String::new();
    header(&mut out, &layout);
    plain_regions(&mut out, &layout, g.base);
    slits(&mut out, &layout, g, &ids);
    edges(&mut out, &layout, g, &ids);
    labels(&mut out, &layout, g);
    out.push_str("</svg>\n");
    out
}

/// Nearest-ramification cells painted sample by sample on each star.
pub fn cells_svg(g: &Skeleton, cells: &CellMap) -> String {
    let mesh = &cells.mesh;
    let layout = Layout::new(&mesh.stars, mesh.window);
    let ids = edge_ids(g);
    let mut out = String::new();
    header(&mut out, &layout);
    out.push_str("<g id=\"stars\" stroke=\"none\">\n");
    let cell = PANEL * mesh.h / mesh.window.width();
    let cell_h = PANEL * mesh.h / mesh.window.height();
    for node in 0..mesh.sample_count() as u32 {
        let star = mesh.stars[mesh.star_of(node)];
        let z = mesh.position(node);
        let (x, y) = layout.map(star, z);
        let fill = match cells.owner[node as usize] {
            u32::MAX => "#ffffff",
            o => color(o as usize),
        };
        writeln!(
            out,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}" fill-opacity="0.35"/>"#,
            x - cell / 2.0,
            y - cell_h / 2.0,
            cell,
            cell_h
        )
        .unwrap();
    }
    for &star in &mesh.stars {
        let (x, y) = layout.origin(star);
        writeln!(
            out,
            r##"<rect x="{x:.3}" y="{y:.3}" width="{PANEL:.3}" height="{PANEL:.3}" fill="none" stroke="#999"/>"##
        )
        .unwrap();
    }
    out.push_str("</g>\n");
    slits(&mut out, &layout, g, &ids);
    edges(&mut out, &layout, g, &ids);
    labels(&mut out, &layout, g);
    out.push_str("</svg>\n");
    out
}
