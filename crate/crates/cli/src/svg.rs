//! SVG rendering of templates: convex layers as closed paths (outermost
//! first), residual points as dots.

use std::fs;
use std::path::Path;

use shapelearn_core::geometry::Layer;
use shapelearn_core::{Point2d, TemplateD};

use crate::HarnessError;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
];

/// Renders one template. The viewBox fits every layer (and residual
/// point) with a 5% margin on each side; the y axis is flipped so the
/// drawing matches the mathematical orientation.
pub fn template_svg(template: &TemplateD) -> String {
    let mut min_x = f64::MAX;
    let mut max_x = f64::MIN;
    let mut min_y = f64::MAX;
    let mut max_y = f64::MIN;
    let mut seen = false;
    let mut extend = |p: &Point2d| {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(-p.y);
        max_y = max_y.max(-p.y);
        seen = true;
    };
    for layer in template.layer_stack.layers() {
        for v in layer.vertices() {
            extend(v);
        }
    }
    for v in template.layer_stack.residual() {
        extend(v);
    }
    if !seen {
        min_x = -1.0;
        max_x = 1.0;
        min_y = -1.0;
        max_y = 1.0;
    }
    let width = (max_x - min_x).max(1e-9);
    let height = (max_y - min_y).max(1e-9);
    let margin_x = 0.05 * width;
    let margin_y = 0.05 * height;
    let stroke = 0.012 * width.max(height);
    let dot = 0.018 * width.max(height);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        min_x - margin_x,
        min_y - margin_y,
        width + 2.0 * margin_x,
        height + 2.0 * margin_y
    ));
    for (i, layer) in template.layer_stack.layers().iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        match layer {
            Layer::Hull(poly) => {
                let mut d = String::new();
                for (j, v) in poly.vertices().iter().enumerate() {
                    let cmd = if j == 0 { 'M' } else { 'L' };
                    d.push_str(&format!("{cmd}{} {} ", v.x, -v.y));
                }
                d.push('Z');
                out.push_str(&format!(
                    "  <path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke}\"/>\n"
                ));
            }
            Layer::Degenerate(pts) => {
                let coords: Vec<String> =
                    pts.iter().map(|v| format!("{},{}", v.x, -v.y)).collect();
                out.push_str(&format!(
                    "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke}\"/>\n",
                    coords.join(" ")
                ));
            }
        }
    }
    for v in template.layer_stack.residual() {
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{dot}\" fill=\"#333333\"/>\n",
            v.x, -v.y
        ));
    }
    out.push_str("</svg>\n");
    out
}

pub fn export_template_svg(
    learner: &shapelearn_core::Learner<f64>,
    template_id: usize,
    path: &Path,
) -> Result<(), HarnessError> {
    let template = learner
        .library()
        .get(template_id)
        .ok_or(HarnessError::UnknownTemplate(template_id))?;
    fs::write(path, template_svg(template)).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use shapelearn_core::descriptors::DescriptorKind;
    use shapelearn_core::templates::build_template;
    use shapelearn_core::{DescriptorConfig, PointSetD};

    fn point_set(pts: &[(f64, f64)]) -> PointSetD {
        PointSetD::new(pts.iter().map(|&(x, y)| Point2d::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn square_template_renders_one_closed_path() {
        let members = [(
            0u64,
            point_set(&[(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]),
        )];
        let t = build_template(
            0,
            &members,
            DescriptorKind::Geometric,
            &DescriptorConfig::default(),
        )
        .unwrap();
        let svg = template_svg(&t);
        assert_eq!(svg.matches("<path").count(), 1);
        // One M, three L segments, closed with Z: four segments total.
        assert_eq!(svg.matches('L').count(), 3);
        assert!(svg.contains('Z'));
        assert_eq!(svg.matches("<circle").count(), 0);
    }

    #[test]
    fn layer_and_residual_counts_match_the_template() {
        let mut pts = vec![(0.0, 0.01)];
        for &s in &[1.0f64, 0.5] {
            pts.extend_from_slice(&[(-s, -s), (s, -s), (s, s), (-s, s)]);
        }
        let members = [(0u64, point_set(&pts))];
        let t = build_template(
            0,
            &members,
            DescriptorKind::Geometric,
            &DescriptorConfig::default(),
        )
        .unwrap();
        let svg = template_svg(&t);
        let drawn = svg.matches("<path").count() + svg.matches("<polyline").count();
        assert_eq!(drawn, t.layer_stack.layer_count());
        assert_eq!(
            svg.matches("<circle").count(),
            t.layer_stack.residual().len()
        );
    }

    #[test]
    fn viewbox_encloses_all_layers_with_margin() {
        let members = [(
            0u64,
            point_set(&[(-2.0, -1.0), (2.0, -1.0), (2.0, 1.0), (-2.0, 1.0)]),
        )];
        let t = build_template(
            0,
            &members,
            DescriptorKind::Geometric,
            &DescriptorConfig::default(),
        )
        .unwrap();
        let svg = template_svg(&t);
        let vb = svg
            .split("viewBox=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        let nums: Vec<f64> = vb.split(' ').map(|s| s.parse().unwrap()).collect();
        let (x, y, w, h) = (nums[0], nums[1], nums[2], nums[3]);
        assert!(x < -2.0 && x + w > 2.0);
        assert!(y < -1.0 && y + h > 1.0);
        assert!((w - 4.0 * 1.1).abs() < 1e-9);
        assert!((h - 2.0 * 1.1).abs() < 1e-9);
    }
}
