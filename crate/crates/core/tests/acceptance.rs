use dehnlog_core::certificate::Status;
use dehnlog_core::suite;

#[test]
fn acceptance() {
    let results = suite::run(&[]);
    let mut failed = Vec::new();
    for (cert, elapsed) in &results {
        let tag = if cert.status == Status::Pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {} ({} ms)", cert.check, elapsed.as_millis());
        if let Some(w) = &cert.witness {
            println!("       {w}");
        }
        if cert.status != Status::Pass {
            failed.push(cert.check.clone());
        }
    }
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
