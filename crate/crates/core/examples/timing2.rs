use hybrid_gaussian::gaussian::DstsShape;
use hybrid_gaussian::metrics;
use hybrid_gaussian::lindblad::FockDensityMatrix;
use num_complex::Complex64;
use std::time::Instant;

fn main() {
    for dim in [227usize, 375] {
        let shape = DstsShape::new(0.26, 0.9, 0.056).unwrap();
        let center = Complex64::new(2.0, -9.8);
        let t0 = Instant::now();
        let rho1 = metrics::dsts_density(center, &shape, dim).unwrap();
        let t_dsts = t0.elapsed();
        let shape2 = DstsShape::new(0.25, 0.93, 0.050).unwrap();
        let rho2 = metrics::dsts_density(center * 1.001, &shape2, dim).unwrap();
        let t0 = Instant::now();
        let f = metrics::fidelity(&rho1, &rho2).unwrap();
        let t_fid = t0.elapsed();
        println!("dim {dim}: dsts {t_dsts:?}, fidelity {t_fid:?} (1-F = {:.3e})", 1.0 - f);
    }
}
