//! Writes every catalog model as TOML, parses it back and checks that the
//! second serialization is byte-identical to the first.

use itosym::model::{catalog, model_hash, parse_model_spec, to_toml, ModelFormat};

fn main() -> itosym::Result<()> {
    for entry in catalog::entries() {
        let text = to_toml(&entry.model);
        let again = to_toml(&parse_model_spec(&text, ModelFormat::Toml)?);
        println!("# {} ({})", entry.name, &model_hash(&entry.model)[..12]);
        println!("{text}");
        assert_eq!(text, again, "round trip changed {}", entry.name);
    }
    Ok(())
}
