use crate::args::{GalleryListArgs, OutputFormat};
use crate::error::CliError;
use crate::support;
use serde::Serialize;

#[derive(Serialize)]
struct EntryOut {
    index: usize,
    label: String,
}

#[derive(Serialize)]
struct ListOutput {
    entries: Vec<EntryOut>,
    count: usize,
    distinct_labels: usize,
}

pub fn run_list(args: GalleryListArgs) -> Result<(), CliError> {
    let gallery = support::load_gallery_file(&args.gallery, true)?;
    let listing = ListOutput {
        entries: gallery
            .entries()
            .iter()
            .enumerate()
            .map(|(index, e)| EntryOut {
                index,
                label: e.label.clone(),
            })
            .collect(),
        count: gallery.len(),
        distinct_labels: gallery.distinct_labels(),
    };
    match args.format {
        OutputFormat::Json => support::emit_json(&listing, &None),
        OutputFormat::Table => {
            for entry in &listing.entries {
                println!("{:>5}  {}", entry.index, entry.label);
            }
            println!(
                "entries: {}; distinct labels (C): {}",
                listing.count, listing.distinct_labels
            );
            Ok(())
        }
    }
}
