use thiele::convergents::convergent_trace;
use thiele::fit::{fit_adaptive, FitConfig};
use thiele::newman::newman_points;

fn main() {
    let data = newman_points(50).unwrap();
    let (model, report) = fit_adaptive(&data, FitConfig::default());
    println!("order = {}, stopped_early = {}", model.order(), report.stopped_early);
    let cmax = model.coeffs().iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let cmin = model.coeffs().iter().fold(f64::INFINITY, |m, a| m.min(a.abs()));
    println!("coeff magnitude range: {cmin:e} ..= {cmax:e}");
    for &x in &[0.4321_f64, -0.9, 0.001] {
        let t = convergent_trace(&model, x, false);
        let mut worst = 0.0_f64;
        for i in 0..=model.order() as isize {
            let (a, b) = t.pair(i);
            worst = worst.max(a.abs()).max(b.abs());
        }
        println!("x = {x}: max |A|,|B| = {worst:e}, final ratio = {}", t.final_ratio());
    }
    // synthetic overflow candidate
    let nodes: Vec<f64> = (0..=100).map(|i| i as f64).collect();
    let coeffs: Vec<f64> = vec![3.0; 101];
    let m = thiele::ThieleModel::new(nodes, coeffs).unwrap();
    let t = convergent_trace(&m, 150.0, false);
    let (a, b) = t.pair(100);
    println!("synthetic unscaled at 150: A = {a:e}, B = {b:e}");
    let ts = convergent_trace(&m, 150.0, true);
    println!("synthetic scaled: pair = {:?}, scale_log(100) = {}", ts.pair(100), ts.scale_log(100));
}
