//! Drives the `lconv` commands in-process and reads back the report and
//! manifest they write.

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("lconv_example");
    std::fs::create_dir_all(&dir)?;
    let zeros = concat!(env!("CARGO_MANIFEST_DIR"), "/data/zeros_10k.txt");
    let out = dir.join("verify_L.csv");
    let code = liouville_conv::cli::run([
        "lconv",
        "verify",
        "L",
        "--zeros",
        zeros,
        "--count",
        "1000",
        "--samples",
        "log:10:10:10000",
        "--output",
        out.to_str().unwrap(),
    ]);
    println!("exit status {code}");
    print!("{}", std::fs::read_to_string(&out)?);
    let manifest = std::fs::read_to_string(dir.join("verify_L.csv.manifest.json"))?;
    println!("{manifest}");
    Ok(())
}
