use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::BinaryImage;

/// Default gray threshold on a 0..=255 scale.
pub const DEFAULT_THRESHOLD: u8 = 128;

/// Loads a PBM (P1/P4) or PGM (P2/P5) file.
///
/// PBM bits that are 1 become set pixels. PGM samples are rescaled to
/// 0..=255 and pixels at or above `threshold` are set.
pub fn load_binary_image(path: &Path, threshold: u8) -> Result<BinaryImage> {
    let bytes = fs::read(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_netpbm(&bytes, threshold).map_err(|e| e.at(path))
}

/// Parse failure before a path is attached.
#[derive(Debug)]
pub enum NetpbmError {
    Malformed(String),
    Unsupported(String),
}

impl NetpbmError {
    pub fn at(self, path: &Path) -> Error {
        match self {
            NetpbmError::Malformed(reason) => Error::Malformed {
                path: path.to_path_buf(),
                reason,
            },
            NetpbmError::Unsupported(detail) => Error::UnsupportedFormat {
                path: path.to_path_buf(),
                detail,
            },
        }
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> std::result::Result<u32, NetpbmError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| NetpbmError::Malformed(format!("expected {what} at byte {start}")))
    }

    /// Plain PBM allows samples without separating whitespace.
    fn bit(&mut self) -> std::result::Result<bool, NetpbmError> {
        self.skip_space_and_comments();
        match self.bytes.get(self.pos) {
            Some(b'0') => {
                self.pos += 1;
                Ok(false)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(NetpbmError::Malformed(format!("expected 0 or 1 at byte {}", self.pos))),
        }
    }
}

/// Parses netpbm bytes; see [`load_binary_image`].
pub fn parse_netpbm(bytes: &[u8], threshold: u8) -> std::result::Result<BinaryImage, NetpbmError> {
    let magic = bytes.get(..2).ok_or_else(|| NetpbmError::Malformed("file is too short".into()))?;
    let kind = match magic {
        b"P1" | b"P2" | b"P4" | b"P5" => magic[1],
        b"P3" | b"P6" => return Err(NetpbmError::Unsupported("color PPM is not a binary edge image".into())),
        b"P7" => return Err(NetpbmError::Unsupported("PAM is not supported".into())),
        _ => return Err(NetpbmError::Unsupported("not a PBM or PGM file".into())),
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number("width")?;
    let height = h.number("height")?;
    if width == 0 || height == 0 {
        return Err(NetpbmError::Malformed(format!("empty image {width}x{height}")));
    }
    let maxval = if matches!(kind, b'2' | b'5') {
        let m = h.number("maxval")?;
        if m == 0 || m > u16::MAX as u32 {
            return Err(NetpbmError::Malformed(format!("maxval {m} is out of range")));
        }
        m
    } else {
        1
    };
    let n = width as usize * height as usize;
    let mut values = Vec::with_capacity(n);
    // a gray sample is set when sample / maxval >= threshold / 255
    let gray_set = |v: u32| v as u64 * 255 >= threshold as u64 * maxval as u64;
    let too_short = || NetpbmError::Malformed("pixel data ends early".into());
    match kind {
        b'1' => {
            for _ in 0..n {
                values.push(h.bit()? as u8);
            }
        }
        b'2' => {
            for _ in 0..n {
                let v = h.number("sample")?;
                if v > maxval {
                    return Err(NetpbmError::Malformed(format!("sample {v} exceeds maxval {maxval}")));
                }
                values.push(gray_set(v) as u8);
            }
        }
        b'4' => {
            // exactly one whitespace byte separates the header from the raster
            let data = bytes.get(h.pos + 1..).ok_or_else(too_short)?;
            let row_bytes = (width as usize).div_ceil(8);
            if data.len() < row_bytes * height as usize {
                return Err(too_short());
            }
            for y in 0..height as usize {
                let row = &data[y * row_bytes..(y + 1) * row_bytes];
                for x in 0..width as usize {
                    values.push((row[x / 8] >> (7 - x % 8)) & 1);
                }
            }
        }
        _ => {
            let data = bytes.get(h.pos + 1..).ok_or_else(too_short)?;
            let wide = maxval > 255;
            let sample_bytes = if wide { 2 } else { 1 };
            if data.len() < n * sample_bytes {
                return Err(too_short());
            }
            for i in 0..n {
                let v = if wide {
                    u16::from_be_bytes([data[2 * i], data[2 * i + 1]]) as u32
                } else {
                    data[i] as u32
                };
                values.push(gray_set(v) as u8);
            }
        }
    }
    BinaryImage::from_pixels(width, height, &values).map_err(|e| NetpbmError::Malformed(e.to_string()))
}

/// Encodes a binary PBM (P4); set pixels are 1 bits.
pub fn encode_pbm(image: &BinaryImage) -> Vec<u8> {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let row_bytes = w.div_ceil(8);
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let start = out.len();
    out.resize(start + row_bytes * h, 0);
    for y in 0..h {
        for x in 0..w {
            if image.pixels()[y * w + x] != 0 {
                out[start + y * row_bytes + x / 8] |= 0x80 >> (x % 8);
            }
        }
    }
    out
}

pub fn write_pbm(image: &BinaryImage, path: &Path) -> Result<()> {
    write_file(path, &encode_pbm(image))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let write = || -> std::io::Result<()> {
        let mut file = fs::File::create(path)?;
        file.write_all(bytes)?;
        file.flush()
    };
    write().map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}
