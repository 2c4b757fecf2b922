use std::time::Instant;
use finsler_lab::geometry::{fixtures, DepthProfile};
use finsler_lab::metrics::{MetricField, MetricKind};
use finsler_lab::types::ComplexVector2;

fn main() {
    for name in ["ball", "egg2"] {
        let dom = fixtures::registry().get(name).unwrap().clone();
        let f = MetricField::new(dom.clone(), MetricKind::CatlinPatched).unwrap();
        let pts = dom.sample_interior(2000, DepthProfile::DyadicCollar { bands: 4 }, 3).unwrap();
        let x = ComplexVector2::from_reals(0.3, -0.2, 0.5, 0.1);
        // context precompute timing
        let t0 = Instant::now();
        let ctxs: Vec<_> = pts.iter().map(|z| dom.point_context(*z).unwrap()).collect();
        let t_ctx = t0.elapsed();
        let t0 = Instant::now();
        let mut acc = 0.0;
        for c in &ctxs { acc += f.eval_with_ctx(c, x).unwrap(); }
        let t_eval = t0.elapsed();
        println!("{name}: ctx {:.1} us/pt, eval {:.1} us/pt (acc {acc:.1})",
            t_ctx.as_micros() as f64 / pts.len() as f64,
            t_eval.as_micros() as f64 / pts.len() as f64);
    }
}
