//! Run orchestration and the statistics report: wires device, controller,
//! and power model together and emits the results as JSON or CSV.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::controller::{AddrMapPolicy, AddressMap, Controller, SchedulerPolicy, SimOutput};
use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::memstate::PowerState;
use crate::power::{self, EnergyBreakdown};
use crate::trace::{self, AccessKind, SyntheticSpec, TraceRecord};

/// Per-rank power state residency, in cycles and as a fraction of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankStateTime {
    pub rank: u32,
    pub cycles: BTreeMap<String, u64>,
    pub fraction: BTreeMap<String, f64>,
}

/// Energy snapshot at a cycle boundary (periodic evaluation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergySnapshot {
    pub cycle: u64,
    pub energy: EnergyBreakdown,
}

/// Full simulator output for one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub device_name: String,
    pub total_sim_cycles: u64,
    pub total_sim_seconds: f64,
    pub n_read_requests: u64,
    pub n_write_requests: u64,
    pub n_row_hits: u64,
    pub n_row_misses: u64,
    /// Hits over all burst accesses; null when nothing was accessed.
    pub row_hit_rate: Option<f64>,
    pub n_act: u64,
    pub n_act_st: u64,
    pub n_stores: u64,
    pub n_ref: u64,
    pub state_time: Vec<RankStateTime>,
    /// MB/s (1e6 bytes per second) moved by read bursts.
    pub avg_read_bandwidth: f64,
    pub avg_write_bandwidth: f64,
    pub avg_read_latency_ns: f64,
    pub avg_write_latency_ns: f64,
    pub energy: EnergyBreakdown,
    #[serde(rename = "avg_power_mW")]
    pub avg_power_mw: f64,
    pub snapshots: Vec<EnergySnapshot>,
}

impl StatsReport {
    /// Check the report's own consistency invariants. Called before any
    /// report leaves the process.
    pub fn validate(&self) -> Result<()> {
        let accesses = self.n_row_hits + self.n_row_misses;
        match self.row_hit_rate {
            Some(rate) => {
                if accesses == 0 {
                    return Err(Error::internal("hit rate reported without accesses"));
                }
                let expected = self.n_row_hits as f64 / accesses as f64;
                if (rate - expected).abs() > 1e-12 {
                    return Err(Error::internal(format!(
                        "hit rate {rate} does not match {}/{accesses}",
                        self.n_row_hits
                    )));
                }
            }
            None => {
                if accesses != 0 {
                    return Err(Error::internal("hit rate missing despite accesses"));
                }
            }
        }
        for rank in &self.state_time {
            let sum: f64 = rank.fraction.values().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::internal(format!(
                    "state time fractions of rank {} sum to {sum}",
                    rank.rank
                )));
            }
            if self.total_sim_cycles > 0 {
                let cycles: u64 = rank.cycles.values().sum();
                if cycles != self.total_sim_cycles {
                    return Err(Error::internal(format!(
                        "state times of rank {} sum to {cycles}, expected {}",
                        rank.rank, self.total_sim_cycles
                    )));
                }
            }
        }
        let categories = self.energy.act_energy
            + self.energy.store_energy
            + self.energy.refresh_energy
            + self.energy.rdwr_energy
            + self.energy.background_energy
            + self.energy.powerdown_energy;
        if (categories - self.energy.total).abs() > 1e-9 * self.energy.total.abs().max(1e-30) {
            return Err(Error::internal("energy categories do not sum to total"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Internal {
            message: format!("report deserialization failed: {e}"),
        })
    }

    /// Lossy single-row flattening; per-rank maps become `rank<i>.<state>`
    /// columns carrying cycles.
    pub fn to_csv(&self) -> String {
        let mut header: Vec<String> = [
            "device_name",
            "total_sim_cycles",
            "total_sim_seconds",
            "n_read_requests",
            "n_write_requests",
            "n_row_hits",
            "n_row_misses",
            "row_hit_rate",
            "n_act",
            "n_act_st",
            "n_stores",
            "n_ref",
            "avg_read_bandwidth",
            "avg_write_bandwidth",
            "avg_read_latency_ns",
            "avg_write_latency_ns",
            "avg_power_mW",
            "act_energy",
            "store_energy",
            "refresh_energy",
            "rdwr_energy",
            "background_energy",
            "powerdown_energy",
            "total_energy",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let mut row: Vec<String> = vec![
            self.device_name.clone(),
            self.total_sim_cycles.to_string(),
            self.total_sim_seconds.to_string(),
            self.n_read_requests.to_string(),
            self.n_write_requests.to_string(),
            self.n_row_hits.to_string(),
            self.n_row_misses.to_string(),
            self.row_hit_rate.map(|r| r.to_string()).unwrap_or_default(),
            self.n_act.to_string(),
            self.n_act_st.to_string(),
            self.n_stores.to_string(),
            self.n_ref.to_string(),
            self.avg_read_bandwidth.to_string(),
            self.avg_write_bandwidth.to_string(),
            self.avg_read_latency_ns.to_string(),
            self.avg_write_latency_ns.to_string(),
            self.avg_power_mw.to_string(),
            self.energy.act_energy.to_string(),
            self.energy.store_energy.to_string(),
            self.energy.refresh_energy.to_string(),
            self.energy.rdwr_energy.to_string(),
            self.energy.background_energy.to_string(),
            self.energy.powerdown_energy.to_string(),
            self.energy.total.to_string(),
        ];
        for rank in &self.state_time {
            for (state, cycles) in &rank.cycles {
                header.push(format!("rank{}.{}", rank.rank, state));
                row.push(cycles.to_string());
            }
        }
        format!("{}\n{}\n", header.join(","), row.join(","))
    }
}

/// Where a run's trace comes from; compare mode requires both runs to share
/// one source.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    File(PathBuf),
    Synthetic(SyntheticSpec),
}

/// One simulation invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub device_config: PathBuf,
    pub trace: TraceSource,
    pub scheduler: SchedulerPolicy,
    pub addr_map: AddrMapPolicy,
    pub snapshot_cycles: Option<u64>,
}

impl RunConfig {
    pub fn new(device_config: impl Into<PathBuf>, trace: TraceSource) -> Self {
        RunConfig {
            device_config: device_config.into(),
            trace,
            scheduler: SchedulerPolicy::FrFcfs,
            addr_map: AddrMapPolicy::RoRaBaCo,
            snapshot_cycles: None,
        }
    }
}

fn load_trace(source: &TraceSource, dev: &DeviceParams, map_policy: AddrMapPolicy) -> Result<Vec<TraceRecord>> {
    match source {
        TraceSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            trace::parse_trace(&text)
        }
        TraceSource::Synthetic(spec) => {
            let map = AddressMap::new(dev, map_policy);
            trace::generate(spec, &map)
        }
    }
}

/// Run one simulation described by `cfg` and build its report.
pub fn run(cfg: &RunConfig) -> Result<StatsReport> {
    let dev = DeviceParams::from_config_file(&cfg.device_config)?;
    let records = load_trace(&cfg.trace, &dev, cfg.addr_map)?;
    run_records(&dev, &records, cfg.scheduler, cfg.addr_map, cfg.snapshot_cycles)
}

/// Run a simulation over in-memory trace records.
pub fn run_records(
    dev: &DeviceParams,
    records: &[TraceRecord],
    scheduler: SchedulerPolicy,
    addr_map: AddrMapPolicy,
    snapshot_cycles: Option<u64>,
) -> Result<StatsReport> {
    dev.validate()?;
    let controller = Controller::new(dev.clone(), addr_map, scheduler);
    let output = controller.run(records, None)?;
    build_report(dev, &output, snapshot_cycles)
}

/// Assemble the report for a finished simulation.
pub fn build_report(
    dev: &DeviceParams,
    output: &SimOutput,
    snapshot_cycles: Option<u64>,
) -> Result<StatsReport> {
    let counters = power::evaluate_commands(
        output.log.commands(),
        dev.ranks as usize,
        dev.banks_per_rank as usize,
    )?;
    let energy = power::breakdown_from_parts(&counters, &output.state_times, output.end_tick, dev)?;

    let end = output.end_tick;
    let seconds = dev.cycles_to_seconds(end);
    let mut state_time = Vec::with_capacity(output.state_times.len());
    for (rank_idx, times) in output.state_times.iter().enumerate() {
        let mut cycles = BTreeMap::new();
        let mut fraction = BTreeMap::new();
        for (state, dwell) in times.iter() {
            cycles.insert(state.name().to_string(), dwell);
            let frac = if end > 0 {
                dwell as f64 / end as f64
            } else if state == PowerState::PwrIdle {
                // zero-length simulation is trivially all idle
                1.0
            } else {
                0.0
            };
            fraction.insert(state.name().to_string(), frac);
        }
        state_time.push(RankStateTime {
            rank: rank_idx as u32,
            cycles,
            fraction,
        });
    }

    let mut n_read_requests = 0;
    let mut n_write_requests = 0;
    let mut read_latency_cycles = 0u64;
    let mut write_latency_cycles = 0u64;
    for req in &output.requests {
        let completion = req.completion_tick.ok_or_else(|| {
            Error::internal("request left unserviced after drain")
        })?;
        let latency = completion - req.arrival_tick;
        match req.kind {
            AccessKind::Read => {
                n_read_requests += 1;
                read_latency_cycles += latency;
            }
            AccessKind::Write => {
                n_write_requests += 1;
                write_latency_cycles += latency;
            }
        }
    }
    let avg_latency_ns = |total_cycles: u64, count: u64| {
        if count == 0 {
            0.0
        } else {
            dev.cycles_to_ns(total_cycles) / count as f64
        }
    };
    let bandwidth = |bursts: u64| {
        if seconds > 0.0 {
            (bursts * dev.burst_bytes()) as f64 / seconds / 1e6
        } else {
            0.0
        }
    };

    let accesses = output.n_row_hits + output.n_row_misses;
    let snapshots = match snapshot_cycles {
        Some(interval) => power::snapshot_breakdowns(output.log.commands(), interval, end, dev)?
            .into_iter()
            .map(|(cycle, energy)| EnergySnapshot { cycle, energy })
            .collect(),
        None => Vec::new(),
    };

    let report = StatsReport {
        device_name: dev.name.clone(),
        total_sim_cycles: end,
        total_sim_seconds: seconds,
        n_read_requests,
        n_write_requests,
        n_row_hits: output.n_row_hits,
        n_row_misses: output.n_row_misses,
        row_hit_rate: (accesses > 0).then(|| output.n_row_hits as f64 / accesses as f64),
        n_act: output.log.count(crate::memstate::CommandKind::Act),
        n_act_st: output.log.count(crate::memstate::CommandKind::ActSt),
        n_stores: counters.total_stores(),
        n_ref: counters.n_ref(),
        state_time,
        avg_read_bandwidth: bandwidth(output.n_rd_bursts),
        avg_write_bandwidth: bandwidth(output.n_wr_bursts),
        avg_read_latency_ns: avg_latency_ns(read_latency_cycles, n_read_requests),
        avg_write_latency_ns: avg_latency_ns(write_latency_cycles, n_write_requests),
        avg_power_mw: energy.avg_power * 1e3,
        energy,
        snapshots,
    };
    report.validate()?;
    Ok(report)
}

/// Deltas of headline metrics, device B minus device A.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareDeltas {
    pub avg_read_latency_ns: f64,
    pub avg_write_latency_ns: f64,
    pub total_energy_j: f64,
    #[serde(rename = "avg_power_mW")]
    pub avg_power_mw: f64,
    pub store_overhead_ns: f64,
}

/// Side-by-side result of two devices replaying one trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub device_a: StatsReport,
    pub device_b: StatsReport,
    /// Total store time each device spent, n_stores * tST.
    pub store_overhead_ns_a: f64,
    pub store_overhead_ns_b: f64,
    pub deltas: CompareDeltas,
}

impl CompareReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Run both configs on the identical trace (concurrently, one isolated
/// instance each) and diff the headline metrics.
pub fn compare(cfg_a: &RunConfig, cfg_b: &RunConfig) -> Result<CompareReport> {
    if cfg_a.trace != cfg_b.trace {
        return Err(Error::CompareMismatch {
            message: "compare requires both runs to share one trace source".into(),
        });
    }
    let (report_a, report_b) = std::thread::scope(|scope| {
        let a = scope.spawn(|| run(cfg_a));
        let b = scope.spawn(|| run(cfg_b));
        let a = a.join().map_err(|_| Error::internal("run A panicked"))?;
        let b = b.join().map_err(|_| Error::internal("run B panicked"))?;
        Ok::<_, Error>((a?, b?))
    })?;

    let overhead = |cfg: &RunConfig, report: &StatsReport| -> Result<f64> {
        let dev = DeviceParams::from_config_file(&cfg.device_config)?;
        Ok(report.n_stores as f64 * dev.cycles_to_ns(dev.tst()))
    };
    let store_overhead_ns_a = overhead(cfg_a, &report_a)?;
    let store_overhead_ns_b = overhead(cfg_b, &report_b)?;
    let deltas = CompareDeltas {
        avg_read_latency_ns: report_b.avg_read_latency_ns - report_a.avg_read_latency_ns,
        avg_write_latency_ns: report_b.avg_write_latency_ns - report_a.avg_write_latency_ns,
        total_energy_j: report_b.energy.total - report_a.energy.total,
        avg_power_mw: report_b.avg_power_mw - report_a.avg_power_mw,
        store_overhead_ns: store_overhead_ns_b - store_overhead_ns_a,
    };
    Ok(CompareReport {
        device_a: report_a,
        device_b: report_b,
        store_overhead_ns_a,
        store_overhead_ns_b,
        deltas,
    })
}
