//! Embedded surface definitions and certificate scripts, with directory and
//! single-file overrides.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use wdp_core::blowup_lc::CertificateScript;
use wdp_core::geometry::SurfaceModel;

use crate::format::{self, DocumentKind, FormatError};

pub const SURFACE_DIR_ENV: &str = "WDP_SURFACE_DIR";

macro_rules! embedded {
    ($dir:literal, [$($name:literal),* $(,)?]) => {
        &[$(($name, include_str!(concat!("../data/", $dir, "/", $name, ".toml")))),*]
    };
}

/// Shipped surfaces in report order.
pub const SURFACES: &[(&str, &str)] = embedded!("surfaces", ["s15", "s12", "s64", "s82", "s45", "s81", "s117"]);
pub const CERTIFICATES: &[(&str, &str)] = embedded!("certificates", ["s15", "s12", "s64", "s82", "s45", "s81", "s117"]);

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {error}")]
    Io { path: PathBuf, error: std::io::Error },
    #[error("{0}: neither a [surface] nor a [certificate] document")]
    UnknownDocument(PathBuf),
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
    #[error("no certificate for surface {0}")]
    MissingCertificate(String),
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub surfaces: Vec<SurfaceModel>,
    pub certificates: Vec<CertificateScript>,
}

fn read(path: &Path) -> Result<String, CatalogError> {
    fs::read_to_string(path).map_err(|error| CatalogError::Io {
        path: path.to_path_buf(),
        error,
    })
}

impl Catalog {
    /// The seven shipped surfaces and their scripts.
    pub fn embedded() -> Result<Self, CatalogError> {
        let mut surfaces = Vec::new();
        for (name, text) in SURFACES {
            surfaces.push(format::parse_surface(text, &format!("<embedded surfaces/{name}.toml>"))?);
        }
        let mut certificates = Vec::new();
        for (name, text) in CERTIFICATES {
            certificates.push(format::parse_certificate(text, &format!("<embedded certificates/{name}.toml>"))?);
        }
        Ok(Catalog { surfaces, certificates })
    }

    /// Embedded data, overridden by `dir` or by the directory in `WDP_SURFACE_DIR`.
    pub fn load(dir: Option<&Path>) -> Result<Self, CatalogError> {
        let mut catalog = Catalog::embedded()?;
        let env_dir = std::env::var_os(SURFACE_DIR_ENV).map(PathBuf::from);
        if let Some(dir) = dir.map(Path::to_path_buf).or(env_dir) {
            catalog.override_from(&dir)?;
        }
        Ok(catalog)
    }

    /// Replace or add every `*.toml` document in `dir`, in file-name order.
    pub fn override_from(&mut self, dir: &Path) -> Result<(), CatalogError> {
        let entries = fs::read_dir(dir).map_err(|error| CatalogError::Io {
            path: dir.to_path_buf(),
            error,
        })?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "toml"))
            .collect();
        paths.sort();
        for p in paths {
            self.add_file(&p)?;
        }
        Ok(())
    }

    /// Load one document; a surface with a known name replaces the shipped one.
    pub fn add_file(&mut self, path: &Path) -> Result<DocumentKind, CatalogError> {
        let text = read(path)?;
        let name = path.display().to_string();
        match format::document_kind(&text, &name)? {
            Some(DocumentKind::Surface) => {
                let s = format::parse_surface(&text, &name)?;
                match self.surfaces.iter_mut().find(|m| m.name() == s.name()) {
                    Some(slot) => *slot = s,
                    None => self.surfaces.push(s),
                }
                Ok(DocumentKind::Surface)
            }
            Some(DocumentKind::Certificate) => {
                let c = format::parse_certificate(&text, &name)?;
                match self.certificates.iter_mut().find(|x| x.id == c.id) {
                    Some(slot) => *slot = c,
                    None => self.certificates.push(c),
                }
                Ok(DocumentKind::Certificate)
            }
            None => Err(CatalogError::UnknownDocument(path.to_path_buf())),
        }
    }

    /// A surface by case-insensitive name, or a path to a definition file.
    pub fn surface(&mut self, selector: &str) -> Result<&SurfaceModel, CatalogError> {
        if selector.ends_with(".toml") {
            let path = Path::new(selector);
            let text = read(path)?;
            let s = format::parse_surface(&text, selector)?;
            let name = s.name().to_string();
            match self.surfaces.iter_mut().find(|m| m.name() == name) {
                Some(slot) => *slot = s,
                None => self.surfaces.push(s),
            }
            return self.surface(&name);
        }
        self.surfaces
            .iter()
            .find(|m| m.name().eq_ignore_ascii_case(selector))
            .ok_or_else(|| CatalogError::UnknownSurface(selector.to_string()))
    }

    pub fn certificates_for(&self, surface: &str) -> Vec<&CertificateScript> {
        self.certificates.iter().filter(|c| c.surface == surface).collect()
    }
}
