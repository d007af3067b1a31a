//! SVG 1.1 rendering of a sampled egg and its construction circles.

use std::fmt::Write as _;

use crate::curve::{CurveParams, PlanePoint};
use crate::format::sig17;

const PIXELS: u32 = 600;

/// Square viewBox `[-e, e]²` with `e = 1.1·max(a, q²w + qb)`, y pointing up.
pub fn render(params: &CurveParams, egg: &[PlanePoint], circles: bool) -> String {
    let d = params.derive();
    let centre2 = -d.q * d.q * params.w();
    let radius2 = d.q * params.b();
    let extent = 1.1 * params.a().max(-centre2 + radius2);
    let stroke = extent / 200.0;

    let mut path = String::new();
    for (i, p) in egg.iter().enumerate() {
        let _ = write!(path, "{}{} {}", if i == 0 { "M" } else { " L" }, sig17(p.x), sig17(p.y));
    }
    path.push_str(" Z");

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{PIXELS}\" height=\"{PIXELS}\" viewBox=\"{} {} {} {}\">",
        sig17(-extent),
        sig17(-extent),
        sig17(2.0 * extent),
        sig17(2.0 * extent)
    );
    let _ = writeln!(
        out,
        "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"{}\">",
        sig17(stroke)
    );
    let _ = writeln!(out, "<path d=\"{path}\" stroke=\"black\"/>");
    if circles {
        let _ = writeln!(
            out,
            "<circle cx=\"0\" cy=\"0\" r=\"{}\" stroke=\"steelblue\"/>",
            sig17(params.a())
        );
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"0\" r=\"{}\" stroke=\"darkorange\"/>",
            sig17(centre2),
            sig17(radius2)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
