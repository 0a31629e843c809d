//! Command-line front end: generate a body-in-sphere mesh and write it as
//! Gmsh MSH 2.2 ASCII.

use clap::Parser;
use emel_meshgen::{standard, BodyShape};

#[derive(Parser)]
#[command(about = "Generate sphere-in-sphere / peanut-in-sphere tet meshes")]
struct Args {
    /// Body shape: "sphere" or "peanut".
    #[arg(long, default_value = "sphere")]
    shape: String,
    /// Refinement level 1..=3.
    #[arg(long, default_value_t = 1)]
    level: u32,
    /// Outer ball radius R.
    #[arg(long, default_value_t = 2.0)]
    radius: f64,
    /// Output path (.msh).
    #[arg(long)]
    out: std::path::PathBuf,
}

fn main() {
    let args = Args::parse();
    let shape = match args.shape.as_str() {
        "sphere" => BodyShape::Sphere,
        "peanut" => BodyShape::Peanut,
        other => {
            eprintln!("unknown shape {other:?} (expected sphere|peanut)");
            std::process::exit(2);
        }
    };
    let model = standard(shape, args.level, args.radius);
    if let Err(e) = model.write_msh2(&args.out) {
        eprintln!("failed to write {}: {e}", args.out.display());
        std::process::exit(1);
    }
    println!("{} -> {}", model.summary(), args.out.display());
}
