use std::time::Instant;
use strandalg::bigmodel::BigModel;
use strandalg::homotopy::verify_homotopy;
use strandalg::pmc::Pmc;
use strandalg::strands::enumerate_basis;

fn main() {
    for (name, pmc) in [
        ("genus1", Pmc::genus1()),
        ("genus2-split", Pmc::genus2_split()),
        ("genus2-antipodal", Pmc::genus2_antipodal()),
    ] {
        let t = Instant::now();
        let basis = enumerate_basis(&pmc);
        println!("{name}: basis {} ({:?})", basis.len(), t.elapsed());
        let model = BigModel::build(&pmc);
        println!("{name}: model generators {}", model.num_generators(&pmc));
        let t = Instant::now();
        match verify_homotopy(&pmc, &model) {
            Ok(n) => println!("{name}: homotopy identity ok on {n} generators ({:?})", t.elapsed()),
            Err(cex) => println!("{name}: FAILED\n{}", cex.describe(&pmc)),
        }
    }
}
