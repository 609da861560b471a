//! The binomial-transform grid and its antidiagonals, which give the
//! coefficient magnitudes of the microcluster polynomials in q.
use microcluster::protocols::{antidiagonal, binomial_transform_table, closed_form_table1, coefficient_magnitudes, in_terms_of_q};

fn main() -> microcluster::Result<()> {
    for row in binomial_transform_table(5, 5)? {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
        println!("{}", cells.join(""));
    }
    for n in 2..=5 {
        let mags = coefficient_magnitudes(&in_terms_of_q(&closed_form_table1(n)?));
        println!("n={n}: antidiagonal {:?}  magnitudes {:?}", antidiagonal(n)?, mags);
    }
    Ok(())
}
