//! Exact polynomials and rational functions over the Gaussian rationals.
use microcluster::algebra::{Caps, GaussianRational, Point, Polynomial, RationalFunction, Variable};

fn main() -> microcluster::Result<()> {
    let a = Polynomial::var(Variable::Alpha);
    let one = Polynomial::one();
    let keep = &one - &a;
    let den = &one + &(&(&a * &a) - &a).scale(&GaussianRational::from_int(2));
    let f = RationalFunction::new(&keep * &keep, den)?;
    println!("f(alpha) = {f}");

    let half = Point::new().with(Variable::Alpha, GaussianRational::from_ratio(1, 2));
    println!("f(1/2)   = {}", f.eval(&half)?);

    let s = f.series_expand(Caps::zero().with(Variable::Alpha, 4))?;
    println!("series   = {s}");

    // (1 + i)^2 = 2i
    let z = GaussianRational::one() + GaussianRational::i();
    println!("(1+i)^2  = {}", z.pow(2));
    Ok(())
}
