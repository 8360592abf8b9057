use sharptop_cli::input::{parse_net, ParsedNet};
use sharptop_core::duality::{Blackbox, Functional};
use sharptop_core::format;
use sharptop_core::funcspaces::{parse_expr, ExprNet};
use sharptop_core::random::{self, NetParams};
use sharptop_core::{GenScalar, PiecewiseNet, Rational, SymbolicNet};

fn half_pow(k: i64) -> Rational {
    Rational::new(1.into(), (1i64 << k).into())
}

#[test]
fn symbolic_nets_round_trip() {
    let mut rng = random::rng(1);
    let p = NetParams::default();
    for _ in 0..200 {
        let n = random::net(&mut rng, &p);
        let text = format::symbolic_to_json(&n);
        assert_eq!(parse_net(&text).unwrap(), ParsedNet::Symbolic(n.clone()), "{text}");
        assert_eq!(format::symbolic_from_json(&text).unwrap(), n);
    }
}

#[test]
fn piecewise_nets_round_trip() {
    let mut rng = random::rng(2);
    let p = NetParams::default();
    for len in 0..20 {
        let breakpoints: Vec<Rational> = (0..=len).map(half_pow).collect();
        let pieces: Vec<SymbolicNet> = (0..len).map(|_| random::net(&mut rng, &p)).collect();
        let tail = random::net(&mut rng, &p);
        let pw = PiecewiseNet::new(breakpoints, pieces, tail).unwrap();
        let text = format::piecewise_to_json(&pw);
        assert_eq!(parse_net(&text).unwrap(), ParsedNet::Piecewise(pw.clone()), "{text}");
        let g = GenScalar::Piecewise(pw);
        assert_eq!(format::scalar_from_json(&format::scalar_to_json(&g)).unwrap(), g);
    }
}

#[test]
fn vectors_round_trip() {
    let mut rng = random::rng(3);
    let p = NetParams::default();
    for dim in 1..6 {
        let v = random::vector(&mut rng, dim, &p);
        assert_eq!(format::vector_from_json(&format::vector_to_json(&v)).unwrap(), v);
    }
}

#[test]
fn functionals_round_trip() {
    let mut rng = random::rng(4);
    let p = NetParams::default();
    let mut fs = vec![Functional::Blackbox(Blackbox::quadratic(3))];
    for dim in 1..4 {
        fs.push(Functional::PairingVector(random::vector(&mut rng, dim, &p)));
        let terms = (0..3)
            .map(|i| (random::net(&mut rng, &p), (0..dim as u32).map(|j| (i + j) % 3).collect()))
            .collect();
        fs.push(Functional::Blackbox(Blackbox::polynomial("poly", dim, terms)));
    }
    for f in fs {
        let text = format::functional_to_json(&f).unwrap();
        let back = format::functional_from_json(&text).unwrap();
        assert_eq!(format::functional_to_json(&back).unwrap(), text);
        for _ in 0..5 {
            let u = random::vector(&mut rng, f.dim(), &p);
            assert_eq!(back.apply_exact(&u).unwrap(), f.apply_exact(&u).unwrap());
        }
    }
}

#[test]
fn expressions_round_trip_through_display() {
    for src in [
        "(sin (div x0 eps))",
        "(mul (pow eps -1) (sin (div x0 eps)))",
        "(exp (neg (div (mul x0 x0) eps)))",
        "(add (bump x0) (mul 1.5 (cos x1)) (log (add 1 (mul x0 x0))))",
        "(sub (pow x0 3) (div 1 (add 2 eps)))",
        "-2.25",
        "(mul 0.1 (sin (mul 0.30000000000000004 x0)))",
    ] {
        let e = parse_expr(src).unwrap();
        let shown = e.to_string();
        assert_eq!(parse_expr(&shown).unwrap(), e, "{src} -> {shown}");
        let net = ExprNet::new(e.clone(), e.min_dim().max(1)).unwrap();
        match parse_net(&net.to_string()).unwrap() {
            ParsedNet::Expr(back) => assert_eq!(back, net),
            other => panic!("{other:?}"),
        }
    }
}
