//! Coordinatewise lattice operations on exact rational vectors.

use riesz_dstat::lattice::{LatticeVector, OrderIdeal};
use riesz_dstat::rational::rat;

fn main() {
    let x = LatticeVector::new(vec![rat(3, 2), rat(-2, 1), rat(0, 1)]).unwrap();
    let y = LatticeVector::from_ints(&[1, 4, -5]).unwrap();

    println!("x = {x}, y = {y}");
    println!("x ∨ y = {}", x.join(&y).unwrap());
    println!("x ∧ y = {}", x.meet(&y).unwrap());
    let p = x.parts();
    println!("x⁺ = {}, x⁻ = {}, |x| = {}", p.pos, p.neg, p.abs);
    println!("x vs y: {:?}", x.compare(&y).unwrap());

    // x∨y + x∧y = x + y, exactly
    let lhs = x.join(&y).unwrap().add(&x.meet(&y).unwrap()).unwrap();
    assert_eq!(lhs, x.add(&y).unwrap());

    let ideal = OrderIdeal::new([1, 2]);
    println!("x in span(e1, e2): {}", ideal.contains(&x).unwrap());
    println!("y in span(e1, e2): {}", ideal.contains(&y).unwrap());
    println!("canonical: {}", y.scale(&rat(1, 3)).canonical());
}
