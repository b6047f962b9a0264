use hybrid_gaussian::hybrid::{Drive, Nonlinearity, SimConfig};
use hybrid_gaussian::lindblad::{self, FockDensityMatrix};
use num_complex::Complex64;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let eta: f64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(-0.004);
    let tf: f64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(15.0);
    let eps = 0.40 / eta.abs().sqrt();
    let config = SimConfig {
        kappa: 1.0,
        detuning: 0.0,
        nonlinearity: Nonlinearity::Kerr { eta },
        drive: Drive::Constant(Complex64::new(eps, 0.0)),
        n_b: 3.2e-3,
        t_final: tf,
        dt_out: 0.5,
    };
    let t0 = Instant::now();
    let dim = lindblad::suggest_dim(&config).unwrap();
    println!("dim = {dim}, suggest took {:?}", t0.elapsed());
    let samples: Vec<f64> = (0..=30).map(|i| i as f64 * tf / 30.0).collect();
    let t0 = Instant::now();
    let traj = lindblad::evolve(&FockDensityMatrix::vacuum(dim), &config, &samples).unwrap();
    let dt = t0.elapsed();
    let (ma, _, mn) = lindblad::moments(&traj.last().unwrap().1);
    println!("oracle evolve: {dt:?}; final <n> = {mn:.2}, |<a>|^2 = {:.2}", ma.norm_sqr());
}
