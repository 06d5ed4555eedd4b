//! Named constructions.

use super::{compose, AlgebraicConstant, Scheme, Stage, StageCoeff};
use crate::error::{invalid, Result};
use crate::ncalg::{Bracket, Poly, Rational};

fn ab() -> Vec<String> {
    vec!["A".into(), "B".into()]
}

fn abt() -> Vec<String> {
    vec!["A".into(), "B".into(), "T".into()]
}

const A: usize = 0;
const B: usize = 1;
const T: usize = 2;

/// `exp(xA) exp(xB)`.
pub fn trotter() -> Scheme {
    Scheme::new(
        "trotter",
        ab(),
        vec![Stage::slot(A, StageCoeff::int(1)), Stage::slot(B, StageCoeff::int(1))],
        1,
        false,
        vec![],
    )
    .expect("trotter is well formed")
}

/// `exp(xA/2) exp(xB) exp(xA/2)`.
pub fn strang() -> Scheme {
    Scheme::new(
        "strang",
        ab(),
        vec![
            Stage::slot(A, StageCoeff::ratio(1, 2)),
            Stage::slot(B, StageCoeff::int(1)),
            Stage::slot(A, StageCoeff::ratio(1, 2)),
        ],
        2,
        true,
        vec![],
    )
    .expect("strang is well formed")
}

/// Symmetric second-order product over `A`, `B` and the shift-time slot `T`,
/// with `T` outermost.
pub fn strang_three() -> Scheme {
    Scheme::new(
        "strang3",
        abt(),
        vec![
            Stage::slot(T, StageCoeff::ratio(1, 2)),
            Stage::slot(A, StageCoeff::ratio(1, 2)),
            Stage::slot(B, StageCoeff::int(1)),
            Stage::slot(A, StageCoeff::ratio(1, 2)),
            Stage::slot(T, StageCoeff::ratio(1, 2)),
        ],
        2,
        true,
        vec![],
    )
    .expect("strang3 is well formed")
}

/// First-order time-ordered product `exp(xA) exp(xB) exp(xT)`.
pub fn g1() -> Scheme {
    Scheme::new(
        "g1",
        abt(),
        vec![
            Stage::slot(A, StageCoeff::int(1)),
            Stage::slot(B, StageCoeff::int(1)),
            Stage::slot(T, StageCoeff::int(1)),
        ],
        1,
        false,
        vec![],
    )
    .expect("g1 is well formed")
}

/// Second-order time-ordered product (midpoint evaluation).
pub fn g2() -> Scheme {
    strang_three().with_name("g2")
}

/// Fourth-order time-ordered product: the quintuple composition of
/// [`strang_three`].
pub fn g4() -> Scheme {
    quintuple(&strang_three()).expect("strang3 is symmetric").with_name("g4")
}

/// Coefficients of `w s^m + (1 - w s)^m` for the fractal recursions.
fn fractal_polynomial(weight: i64, m: u32) -> Vec<Rational> {
    let s = Poly::var("s");
    let w = Rational::from_integer(weight.into());
    let p = s.pow(m).scale(&w).add(&Poly::int(1).sub(&s.scale(&w)).pow(m));
    (0..=m)
        .map(|k| {
            p.terms()
                .find(|(mono, _)| mono.degree() == k)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| Rational::from_integer(0.into()))
        })
        .collect()
}

fn fractal_base_order(base: &Scheme) -> Result<usize> {
    if !base.symmetric() {
        return invalid(format!("fractal composition needs a symmetric base, {} is not", base.name()));
    }
    let order = base.claimed_order();
    if order == 0 || order % 2 != 0 {
        return invalid(format!("fractal composition needs an even base order, got {order}"));
    }
    Ok(order)
}

/// `S(x) = base(sx) base((1−2s)x) base(sx)` with `2s^{2k+1} + (1−2s)^{2k+1} = 0`,
/// promoting a symmetric order-`2k` scheme to order `2k+2`.
pub fn triple_jump(base: &Scheme) -> Result<Scheme> {
    let order = fractal_base_order(base)?;
    let m = order as u32 + 1;
    let name = if order == 2 { "s".to_string() } else { format!("s_tj{order}") };
    let guess = 1.0 / (2.0 - 2f64.powf(1.0 / m as f64));
    let constant = AlgebraicConstant::from_root(&name, fractal_polynomial(2, m), guess);
    let consts = [constant.clone()];
    let s = StageCoeff::algebraic(Poly::var(&name), &consts);
    let middle = StageCoeff::algebraic(Poly::int(1).sub(&Poly::var(&name).scale(&Rational::from_integer(2.into()))), &consts);
    compose(
        format!("triple({})", base.name()),
        &[(base, s.clone()), (base, middle), (base, s)],
        order + 2,
        true,
        vec![constant],
    )
}

/// `S(x) = base(sx)² base((1−4s)x) base(sx)²` with `4s^{2k+1} + (1−4s)^{2k+1} = 0`.
pub fn quintuple(base: &Scheme) -> Result<Scheme> {
    let order = fractal_base_order(base)?;
    let m = order as u32 + 1;
    let name = format!("s{order}");
    let guess = 1.0 / (4.0 - 4f64.powf(1.0 / m as f64));
    let constant = AlgebraicConstant::from_root(&name, fractal_polynomial(4, m), guess);
    let consts = [constant.clone()];
    let s = StageCoeff::algebraic(Poly::var(&name), &consts);
    let middle = StageCoeff::algebraic(Poly::int(1).sub(&Poly::var(&name).scale(&Rational::from_integer(4.into()))), &consts);
    compose(
        format!("quintuple({})", base.name()),
        &[(base, s.clone()), (base, s.clone()), (base, middle), (base, s.clone()), (base, s)],
        order + 2,
        true,
        vec![constant],
    )
}

/// Sixth-order fractal scheme `quintuple(quintuple(strang))`.
pub fn s6() -> Scheme {
    let s4 = quintuple(&strang()).expect("strang is symmetric");
    quintuple(&s4).expect("s4 is symmetric").with_name("s6")
}

/// Eighth-order fractal scheme `quintuple(s6)`.
pub fn s8() -> Scheme {
    quintuple(&s6()).expect("s6 is symmetric").with_name("s8")
}

/// Ruth's third-order product.
pub fn ruth() -> Scheme {
    let c = |n, d| StageCoeff::ratio(n, d);
    Scheme::new(
        "ruth",
        ab(),
        vec![
            Stage::slot(A, c(7, 24)),
            Stage::slot(B, c(2, 3)),
            Stage::slot(A, c(3, 4)),
            Stage::slot(B, c(-2, 3)),
            Stage::slot(A, c(-1, 24)),
            Stage::slot(B, c(1, 1)),
        ],
        3,
        false,
        vec![],
    )
    .expect("ruth is well formed")
}

fn comm_ab() -> Bracket {
    Bracket::comm(Bracket::Gen(A), Bracket::Gen(B))
}

/// `exp(xA) exp(xB) exp(−x²[A,B]/2)`.
pub fn hybrid_second() -> Scheme {
    Scheme::new(
        "hybrid2",
        ab(),
        vec![
            Stage::slot(A, StageCoeff::int(1)),
            Stage::slot(B, StageCoeff::int(1)),
            Stage::commutator(comm_ab(), 2, StageCoeff::ratio(-1, 2)),
        ],
        2,
        false,
        vec![],
    )
    .expect("hybrid2 is well formed")
}

/// Fourth-order hybrid product
/// `exp(x³[B,[A,B]]/432) S_a(x/3) S_b(x/3) S_a(x/3) exp(x³[B,[A,B]]/432)`
/// with `S_a = exp(xA/2) exp(xB) exp(xA/2)` and `S_b = exp(xB/2) exp(xA) exp(xB/2)`.
pub fn hybrid_fourth() -> Scheme {
    let bab = Bracket::comm(Bracket::Gen(B), comm_ab());
    let c = |n, d| StageCoeff::ratio(n, d);
    let sa = |v: &mut Vec<Stage>| {
        v.push(Stage::slot(A, c(1, 6)));
        v.push(Stage::slot(B, c(1, 3)));
        v.push(Stage::slot(A, c(1, 6)));
    };
    let mut stages = vec![Stage::commutator(bab.clone(), 3, c(1, 432))];
    sa(&mut stages);
    stages.push(Stage::slot(B, c(1, 6)));
    stages.push(Stage::slot(A, c(1, 3)));
    stages.push(Stage::slot(B, c(1, 6)));
    sa(&mut stages);
    stages.push(Stage::commutator(bab, 3, c(1, 432)));
    Scheme::new("hybrid4", ab(), stages, 4, true, vec![]).expect("hybrid4 is well formed")
}

pub const CATALOG_NAMES: &[&str] = &[
    "trotter", "strang", "triple4", "quintuple4", "s6", "s8", "ruth", "hybrid2", "hybrid4", "g1",
    "g2", "g4",
];

/// Looks up a named construction.
pub fn by_name(name: &str) -> Result<Scheme> {
    Ok(match name {
        "trotter" => trotter(),
        "strang" => strang(),
        "triple4" => triple_jump(&strang())?.with_name("triple4"),
        "quintuple4" | "s4" => quintuple(&strang())?.with_name("quintuple4"),
        "s6" => s6(),
        "s8" => s8(),
        "ruth" => ruth(),
        "hybrid2" => hybrid_second(),
        "hybrid4" => hybrid_fourth(),
        "g1" => g1(),
        "g2" => g2(),
        "g4" => g4(),
        "strang3" => strang_three(),
        other => return invalid(format!("unknown scheme {other:?}; known: {}", CATALOG_NAMES.join(", "))),
    })
}

/// Every named construction.
pub fn catalog() -> Vec<Scheme> {
    CATALOG_NAMES
        .iter()
        .map(|n| by_name(n).expect("catalog names resolve"))
        .collect()
}
