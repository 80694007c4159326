use skw::dynamics::{integrate, CoupledState, Diagnostics, SolverConfig};
use skw::grid::make_grid;
use skw::{Complex64, ComplexField, PhysParams, RealField};

fn main() -> skw::Result<()> {
    let grid = make_grid(256, 100.0)?;
    let u = ComplexField::from_fn(&grid, |x| Complex64::from_polar((-x * x).exp(), x));
    let v = RealField::from_fn(&grid, |x| 0.5 * (-x * x).exp());
    let state = CoupledState::new(u, v, 0.0)?;

    let params = PhysParams::new(1.0, 1.0, 1.0, 1.0, 1.0)?;
    let config = SolverConfig { dt: 1e-3, ..Default::default() };
    let end = integrate(&state, 1.0, &params, &config, 100, |d| {
        println!("t = {:.3}, mass = {:.12e}", d.t, d.conserved.mass);
    })?;
    println!("final L2(u) = {:.6}", Diagnostics::measure(&end, &params).l2_u);
    Ok(())
}
