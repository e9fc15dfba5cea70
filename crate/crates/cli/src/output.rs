use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use srise_core::imaging::{
    render_overlay, save_png, write_map_binary, write_map_csv, Image, SaliencyMap,
};

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root)
            .with_context(|| format!("cannot create output directory {}", root.display()))?;
        Ok(OutDir {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    /// `<stem>.csv` and `<stem>.bin`.
    pub fn map(&self, stem: &str, map: &SaliencyMap) -> Result<()> {
        write_map_csv(map, self.path(&format!("{stem}.csv")))?;
        write_map_binary(map, self.path(&format!("{stem}.bin")))?;
        Ok(())
    }

    pub fn png(&self, name: &str, img: &Image) -> Result<()> {
        save_png(img, self.path(name))?;
        Ok(())
    }

    pub fn overlay(&self, name: &str, img: &Image, map: &SaliencyMap, alpha: f64) -> Result<Image> {
        let over = render_overlay(img, map, alpha)?;
        self.png(name, &over)?;
        Ok(over)
    }

    pub fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
    }

    pub fn text(&self, name: &str, text: &str) -> Result<()> {
        let path = self.path(name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
    }
}
