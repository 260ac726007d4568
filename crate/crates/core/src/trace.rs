//! Trace parsing, serialization, and synthetic trace generation.
//!
//! Trace files are line oriented: `<timestamp_ns> <R|W> <0xHEXADDR>
//! <size_bytes>`, whitespace separated, `#` starts a comment. Timestamps
//! must be non-decreasing.
//!
//! Synthetic generation is bit-exact reproducible. The generator is a
//! SplitMix64 sequence over the seed, and draws happen in a fixed order:
//! pattern setup draws first (rank, bank, row selection where the pattern
//! needs them), then per record an address draw (UNIFORM_RANDOM only)
//! followed by one kind draw. A record is a WRITE when
//! `(next_u64() >> 11) * 2^-53 < write_fraction`.

use std::fmt::Write as _;

use crate::controller::AddressMap;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessKind {
    Read,
    Write,
}

impl AccessKind {
    pub fn letter(self) -> char {
        match self {
            AccessKind::Read => 'R',
            AccessKind::Write => 'W',
        }
    }
}

/// One memory access in a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRecord {
    pub timestamp_ns: u64,
    pub kind: AccessKind,
    pub address: u64,
    pub size_bytes: u32,
}

/// SplitMix64; fixed so generated traces are identical across
/// implementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

pub fn parse_trace(text: &str) -> Result<Vec<TraceRecord>> {
    let mut records = Vec::new();
    let mut last_ts: Option<u64> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next_field = |what: &str| {
            fields.next().ok_or_else(|| Error::TraceParse {
                line: line_no,
                message: format!("missing {what}"),
            })
        };
        let ts_text = next_field("timestamp")?;
        let timestamp_ns = ts_text.parse::<u64>().map_err(|_| Error::TraceParse {
            line: line_no,
            message: format!("bad timestamp `{ts_text}`"),
        })?;
        let kind = match next_field("access kind")? {
            "R" => AccessKind::Read,
            "W" => AccessKind::Write,
            other => {
                return Err(Error::TraceParse {
                    line: line_no,
                    message: format!("access kind must be R or W, got `{other}`"),
                })
            }
        };
        let addr_text = next_field("address")?;
        let hex = addr_text
            .strip_prefix("0x")
            .or_else(|| addr_text.strip_prefix("0X"))
            .ok_or_else(|| Error::TraceParse {
                line: line_no,
                message: format!("address must be 0x-prefixed hex, got `{addr_text}`"),
            })?;
        let address = u64::from_str_radix(hex, 16).map_err(|_| Error::TraceParse {
            line: line_no,
            message: format!("bad hex address `{addr_text}`"),
        })?;
        let size_text = next_field("size")?;
        let size_bytes = size_text.parse::<u32>().map_err(|_| Error::TraceParse {
            line: line_no,
            message: format!("bad size `{size_text}`"),
        })?;
        if size_bytes == 0 {
            return Err(Error::TraceParse {
                line: line_no,
                message: "size must be >= 1 byte".into(),
            });
        }
        if let Some(extra) = fields.next() {
            return Err(Error::TraceParse {
                line: line_no,
                message: format!("unexpected trailing field `{extra}`"),
            });
        }
        if let Some(prev) = last_ts {
            if timestamp_ns < prev {
                return Err(Error::TraceOrder {
                    line: line_no,
                    message: format!("timestamp {timestamp_ns} below predecessor {prev}"),
                });
            }
        }
        last_ts = Some(timestamp_ns);
        records.push(TraceRecord {
            timestamp_ns,
            kind,
            address,
            size_bytes,
        });
    }
    Ok(records)
}

pub fn serialize_trace(records: &[TraceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(
            out,
            "{} {} {:#x} {}",
            r.timestamp_ns,
            r.kind.letter(),
            r.address,
            r.size_bytes
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TracePattern {
    SameRow,
    RowAlternate,
    Sequential,
    UniformRandom,
}

impl TracePattern {
    pub fn name(self) -> &'static str {
        match self {
            TracePattern::SameRow => "same-row",
            TracePattern::RowAlternate => "row-alternate",
            TracePattern::Sequential => "sequential",
            TracePattern::UniformRandom => "uniform-random",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "same-row" => Some(TracePattern::SameRow),
            "row-alternate" => Some(TracePattern::RowAlternate),
            "sequential" => Some(TracePattern::Sequential),
            "uniform-random" => Some(TracePattern::UniformRandom),
            _ => None,
        }
    }
}

/// Recipe for a synthetic trace. The same spec (including seed) always
/// yields the same records on the same address map.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub pattern: TracePattern,
    pub count: u64,
    /// Fraction of records that are writes, in [0, 1].
    pub write_fraction: f64,
    pub inter_arrival_ns: u64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.write_fraction) {
            return Err(Error::Domain {
                message: format!("write_fraction must be in [0,1], got {}", self.write_fraction),
            });
        }
        Ok(())
    }
}

/// Generate a synthetic trace. Every record is one burst wide so each trace
/// line maps to exactly one device burst access.
pub fn generate(spec: &SyntheticSpec, map: &AddressMap) -> Result<Vec<TraceRecord>> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let burst_bytes = map.burst_bytes();
    let size = burst_bytes as u32;
    let bursts_per_row = map.bursts_per_row();
    let n_bursts = map.capacity_bytes() / burst_bytes;
    let mut records = Vec::with_capacity(spec.count as usize);

    enum Plan {
        Fixed { rank: u32, bank: u32, row: u32 },
        TwoRows { rank: u32, bank: u32, rows: [u32; 2] },
        Sequential,
        Random,
    }
    let plan = match spec.pattern {
        TracePattern::SameRow => Plan::Fixed {
            rank: (rng.next_u64() % u64::from(map.ranks())) as u32,
            bank: (rng.next_u64() % u64::from(map.banks())) as u32,
            row: (rng.next_u64() % u64::from(map.rows())) as u32,
        },
        TracePattern::RowAlternate => {
            let rank = (rng.next_u64() % u64::from(map.ranks())) as u32;
            let bank = (rng.next_u64() % u64::from(map.banks())) as u32;
            let rows = u64::from(map.rows());
            if rows < 2 {
                return Err(Error::Domain {
                    message: "row-alternate needs at least two rows".into(),
                });
            }
            let row_a = rng.next_u64() % rows;
            let row_b = (row_a + 1 + rng.next_u64() % (rows - 1)) % rows;
            Plan::TwoRows {
                rank,
                bank,
                rows: [row_a as u32, row_b as u32],
            }
        }
        TracePattern::Sequential => Plan::Sequential,
        TracePattern::UniformRandom => Plan::Random,
    };

    for k in 0..spec.count {
        let address = match &plan {
            Plan::Fixed { rank, bank, row } => {
                let column = ((k % bursts_per_row) * u64::from(map.burst_length())) as u32;
                map.encode(*rank, *bank, *row, column)
            }
            Plan::TwoRows { rank, bank, rows } => {
                map.encode(*rank, *bank, rows[(k % 2) as usize], 0)
            }
            Plan::Sequential => (k * burst_bytes) % map.capacity_bytes(),
            Plan::Random => (rng.next_u64() % n_bursts) * burst_bytes,
        };
        let kind = if rng.next_f64() < spec.write_fraction {
            AccessKind::Write
        } else {
            AccessKind::Read
        };
        records.push(TraceRecord {
            timestamp_ns: k * spec.inter_arrival_ns,
            kind,
            address,
            size_bytes: size,
        });
    }
    Ok(records)
}
