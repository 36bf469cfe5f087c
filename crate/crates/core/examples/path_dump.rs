//! Simulates jump-diffusion paths, writes them to a binary dump and reads
//! them back. Pass a file name to keep the dump.

use std::fs::File;
use std::io::BufWriter;

use itosym::model::catalog;
use itosym::model::JumpLaw;
use itosym::rng::stream_id;
use itosym::simulate::dump::{read_dump, write_header, write_path, DumpHeader};
use itosym::simulate::{simulate_path, SimConfig};

fn main() -> itosym::Result<()> {
    let m = catalog::jump_diffusion(
        vec![0.1],
        0.5,
        2.0,
        JumpLaw::Gaussian {
            mean: 0.0,
            std: 0.5,
        },
    );
    let mut cfg = SimConfig::new(0.01, 1.0, 11);
    cfg.exit_radii = vec![0.5, 1.0];
    let target = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("itosym-paths.bin"), Into::into);
    let count = 4u64;
    let mut w = BufWriter::new(File::create(&target)?);
    write_header(&mut w, &DumpHeader::new(&m, &cfg, count))?;
    for i in 0..count {
        let stream = stream_id(0, i);
        let path = simulate_path(
            &m,
            0.0,
            &[0.0],
            &SimConfig {
                stream,
                ..cfg.clone()
            },
        )?;
        write_path(&mut w, stream, &path)?;
    }
    drop(w);
    let (header, paths) = read_dump(File::open(&target)?)?;
    println!(
        "{}: {} paths of dimension {}",
        target.display(),
        header.count,
        header.dim
    );
    for (stream, p) in &paths {
        let exits: Vec<String> = p
            .exits
            .iter()
            .map(|e| format!("R={} at {:?}", e.radius, e.time))
            .collect();
        println!(
            "stream {stream:#x}: {} points, {} jumps, sup {:.3}, end {:+.3}, exits [{}]",
            p.times.len(),
            p.jumps.len(),
            p.sup,
            p.states[p.states.len() - 1][0],
            exits.join(", ")
        );
    }
    Ok(())
}
