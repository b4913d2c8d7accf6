use fga_core::families;
use fga_core::growth::{certify_no_cancellation, growth_of_class, GrowthConfig, Subject};
use fga_core::word::CyclicWord;

fn main() {
    let c = families::theta_varied(5).unwrap();
    let names = &c.named.names;
    let a1 = CyclicWord::parse("a1", names).unwrap();
    let mut subj = a1.clone();
    for shift in 0..5 {
        let cert = certify_no_cancellation(&c.named.aut, &Subject::Class(subj.clone())).unwrap();
        println!("shift {shift}: len={} cert.valid={} word={}", subj.len(), cert.valid, subj.display(names));
        subj = c.named.aut.apply_class(&subj).unwrap();
        if subj.len() > 100 { println!("(len {})", subj.len()); }
    }
    let mut cfg = GrowthConfig::for_sweep();
    cfg.empirical = false;
    match growth_of_class(&c.named.aut, &a1, &cfg) {
        Ok(m) => println!("a1 -> lambda={} m={} conf={} prov={:?}", m.growth.lambda.approx, m.growth.m, m.growth.confidence, m.growth.provenance),
        Err(e) => println!("a1 -> error: {e}"),
    }
}
