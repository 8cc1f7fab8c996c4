//! Fetching b-files by sequence number.
//!
//! The file for `A000670` is read from `<base>/A000670/b000670.txt`, where
//! the base is an `http(s)://` or `file://` URL. Fetched files are kept next
//! to the cache and reused.

use std::fs;
use std::path::Path;

use crate::error::{CliError, CliResult};

fn file_name(id: &str) -> CliResult<String> {
    let digits = id.strip_prefix('A').filter(|d| d.len() == 6 && d.bytes().all(|b| b.is_ascii_digit()));
    match digits {
        Some(d) => Ok(format!("b{d}.txt")),
        None => Err(CliError::Usage(format!("`{id}` is not a sequence number like A000670"))),
    }
}

pub fn bfile_text(id: &str, base: &str, store: Option<&Path>) -> CliResult<String> {
    let name = file_name(id)?;
    if let Some(text) = store.and_then(|dir| fs::read_to_string(dir.join(&name)).ok()) {
        return Ok(text);
    }
    let url = format!("{}/{id}/{name}", base.trim_end_matches('/'));
    let text = if let Some(path) = url.strip_prefix("file://") {
        fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {url}: {e}")))?
    } else if url.starts_with("http://") || url.starts_with("https://") {
        ureq::get(&url)
            .call()
            .and_then(|mut response| response.body_mut().read_to_string())
            .map_err(|e| CliError::Usage(format!("cannot fetch {url}: {e}")))?
    } else {
        return Err(CliError::Usage(format!("unsupported base URL `{base}`")));
    };
    if let Some(dir) = store {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(&name), &text)?;
    }
    Ok(text)
}
