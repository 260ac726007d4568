//! The memory controller: address mapping, burst splitting, scheduling under
//! timing constraints, ACT/ACT_ST selection through the bank state, DRAM
//! auto-refresh, and the command log handed to the power model.

use crate::device::{ns_to_cycles_floor, DeviceKind, DeviceParams};
use crate::error::{Error, Result};
use crate::memstate::{AutoTimings, Command, CommandKind, RankState, StateTimes};
use crate::trace::{AccessKind, TraceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AddrMapPolicy {
    /// row : rank : bank : column, row in the highest bits.
    RoRaBaCo,
    /// row : bank : rank : column.
    RoBaRaCo,
}

impl AddrMapPolicy {
    pub fn name(self) -> &'static str {
        match self {
            AddrMapPolicy::RoRaBaCo => "rorabaco",
            AddrMapPolicy::RoBaRaCo => "robaraco",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "rorabaco" => Some(AddrMapPolicy::RoRaBaCo),
            "robaraco" => Some(AddrMapPolicy::RoBaRaCo),
            _ => None,
        }
    }
}

/// Decoded location of a byte address.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub rank: u32,
    pub bank: u32,
    pub row: u32,
    pub column: u32,
}

/// Maps byte addresses to (rank, bank, row, column) and back.
#[derive(Debug, Clone)]
pub struct AddressMap {
    policy: AddrMapPolicy,
    ranks: u32,
    banks: u32,
    rows: u32,
    columns: u32,
    bytes_per_column: u32,
    burst_length: u32,
    capacity: u64,
}

impl AddressMap {
    pub fn new(dev: &DeviceParams, policy: AddrMapPolicy) -> Self {
        AddressMap {
            policy,
            ranks: dev.ranks,
            banks: dev.banks_per_rank,
            rows: dev.rows_per_bank,
            columns: dev.columns_per_row,
            bytes_per_column: dev.bytes_per_column,
            burst_length: dev.burst_length,
            capacity: dev.capacity_bytes(),
        }
    }

    pub fn ranks(&self) -> u32 {
        self.ranks
    }
    pub fn banks(&self) -> u32 {
        self.banks
    }
    pub fn rows(&self) -> u32 {
        self.rows
    }
    pub fn burst_length(&self) -> u32 {
        self.burst_length
    }
    pub fn capacity_bytes(&self) -> u64 {
        self.capacity
    }

    pub fn row_bytes(&self) -> u64 {
        u64::from(self.columns) * u64::from(self.bytes_per_column)
    }

    pub fn burst_bytes(&self) -> u64 {
        u64::from(self.burst_length) * u64::from(self.bytes_per_column)
    }

    pub fn bursts_per_row(&self) -> u64 {
        u64::from(self.columns / self.burst_length)
    }

    pub fn decode(&self, addr: u64) -> Result<Location> {
        if addr >= self.capacity {
            return Err(Error::AddressOutOfRange {
                address: addr,
                capacity: self.capacity,
            });
        }
        let row_bytes = self.row_bytes();
        let column = ((addr % row_bytes) / u64::from(self.bytes_per_column)) as u32;
        let mut x = addr / row_bytes;
        let (rank, bank, row) = match self.policy {
            AddrMapPolicy::RoRaBaCo => {
                let bank = x % u64::from(self.banks);
                x /= u64::from(self.banks);
                let rank = x % u64::from(self.ranks);
                x /= u64::from(self.ranks);
                (rank as u32, bank as u32, x as u32)
            }
            AddrMapPolicy::RoBaRaCo => {
                let rank = x % u64::from(self.ranks);
                x /= u64::from(self.ranks);
                let bank = x % u64::from(self.banks);
                x /= u64::from(self.banks);
                (rank as u32, bank as u32, x as u32)
            }
        };
        debug_assert!(row < self.rows);
        Ok(Location {
            rank,
            bank,
            row,
            column,
        })
    }

    /// Byte address of the given column; inverse of `decode` for
    /// column-aligned addresses.
    pub fn encode(&self, rank: u32, bank: u32, row: u32, column: u32) -> u64 {
        debug_assert!(rank < self.ranks && bank < self.banks);
        debug_assert!(row < self.rows && column < self.columns);
        let x = match self.policy {
            AddrMapPolicy::RoRaBaCo => {
                (u64::from(row) * u64::from(self.ranks) + u64::from(rank)) * u64::from(self.banks)
                    + u64::from(bank)
            }
            AddrMapPolicy::RoBaRaCo => {
                (u64::from(row) * u64::from(self.banks) + u64::from(bank)) * u64::from(self.ranks)
                    + u64::from(rank)
            }
        };
        x * self.row_bytes() + u64::from(column) * u64::from(self.bytes_per_column)
    }
}

/// Burst-aligned start addresses covering `[addr, addr + size)`.
pub fn split_into_bursts(addr: u64, size_bytes: u32, burst_bytes: u64) -> Vec<u64> {
    debug_assert!(size_bytes >= 1);
    let first = addr / burst_bytes;
    let last = (addr + u64::from(size_bytes) - 1) / burst_bytes;
    (first..=last).map(|i| i * burst_bytes).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchedulerPolicy {
    /// First-ready FCFS: row hits first across bank heads, FCFS within a bank.
    FrFcfs,
    /// Strict arrival order; the head request blocks younger ones.
    Fcfs,
}

impl SchedulerPolicy {
    pub fn name(self) -> &'static str {
        match self {
            SchedulerPolicy::FrFcfs => "frfcfs",
            SchedulerPolicy::Fcfs => "fcfs",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "frfcfs" => Some(SchedulerPolicy::FrFcfs),
            "fcfs" => Some(SchedulerPolicy::Fcfs),
            _ => None,
        }
    }
}

/// One request from the trace, with its completion filled in once serviced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryRequest {
    pub arrival_tick: u64,
    pub kind: AccessKind,
    pub address: u64,
    pub size_bytes: u32,
    pub completion_tick: Option<u64>,
}

/// Ordered sequence of issued commands; issue ticks are non-decreasing.
#[derive(Debug, Clone, Default)]
pub struct CommandLog {
    commands: Vec<Command>,
}

impl CommandLog {
    pub fn push(&mut self, cmd: Command) {
        if let Some(last) = self.commands.last() {
            assert!(
                cmd.issue_tick >= last.issue_tick,
                "command log must be time ordered"
            );
        }
        self.commands.push(cmd);
    }

    pub fn commands(&self) -> &[Command] {
        &self.commands
    }

    pub fn len(&self) -> usize {
        self.commands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    pub fn count(&self, kind: CommandKind) -> u64 {
        self.commands.iter().filter(|c| c.kind == kind).count() as u64
    }
}

impl<'a> IntoIterator for &'a CommandLog {
    type Item = &'a Command;
    type IntoIter = std::slice::Iter<'a, Command>;
    fn into_iter(self) -> Self::IntoIter {
        self.commands.iter()
    }
}

/// Everything a finished simulation produced.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub log: CommandLog,
    pub requests: Vec<MemoryRequest>,
    /// Simulation end: last data transfer (or the requested idle horizon).
    pub end_tick: u64,
    pub n_row_hits: u64,
    pub n_row_misses: u64,
    pub n_rd_bursts: u64,
    pub n_wr_bursts: u64,
    /// Per-rank dwell times at `end_tick`, from the live automata.
    pub state_times: Vec<StateTimes>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    NeedsPre,
    NeedsAct,
    NeedsColumn,
}

#[derive(Debug, Clone)]
struct Burst {
    req: usize,
    rank: u32,
    bank: u32,
    row: u32,
    kind: AccessKind,
    seq: usize,
    phase: Phase,
}

#[derive(Debug)]
struct RankCtl {
    power: RankState,
    /// Rank blocked until this tick (REF occupancy).
    avail_at: u64,
    /// Next scheduled auto-refresh (DRAM only).
    next_refresh_due: Option<u64>,
    /// Set once refresh precharges are done and REF waits to issue.
    refresh_ready_at: Option<u64>,
    /// Per-bank in-flight burst.
    active: Vec<Option<usize>>,
}

/// Trace-driven controller for a single device/channel.
pub struct Controller {
    dev: DeviceParams,
    map: AddressMap,
    policy: SchedulerPolicy,
    ranks: Vec<RankCtl>,
    log: CommandLog,
    /// Channel data-bus serialization: next tick a column command may issue.
    next_col_allowed: u64,
    n_row_hits: u64,
    n_row_misses: u64,
    n_rd_bursts: u64,
    n_wr_bursts: u64,
    ran: bool,
}

impl Controller {
    pub fn new(dev: DeviceParams, map_policy: AddrMapPolicy, policy: SchedulerPolicy) -> Self {
        let auto = AutoTimings::from_device(&dev);
        let trefi = match dev.kind {
            DeviceKind::Dram => dev.trefi(),
            DeviceKind::Stt => None,
        };
        let ranks = (0..dev.ranks)
            .map(|_| RankCtl {
                power: RankState::new(dev.banks_per_rank as usize, auto),
                avail_at: 0,
                next_refresh_due: trefi,
                refresh_ready_at: None,
                active: vec![None; dev.banks_per_rank as usize],
            })
            .collect();
        let map = AddressMap::new(&dev, map_policy);
        Controller {
            dev,
            map,
            policy,
            ranks,
            log: CommandLog::default(),
            next_col_allowed: 0,
            n_row_hits: 0,
            n_row_misses: 0,
            n_rd_bursts: 0,
            n_wr_bursts: 0,
            ran: false,
        }
    }

    pub fn address_map(&self) -> &AddressMap {
        &self.map
    }

    /// Run the trace to completion. `min_end_cycle` extends the simulation
    /// with idle time (auto-refresh keeps running on DRAM) up to the given
    /// cycle, which is what an idle-device measurement uses.
    pub fn run(
        mut self,
        trace: &[TraceRecord],
        min_end_cycle: Option<u64>,
    ) -> Result<SimOutput> {
        assert!(!self.ran, "controller instances are single use");
        self.ran = true;

        let mut requests = Vec::with_capacity(trace.len());
        let mut bursts: Vec<Burst> = Vec::new();
        let mut remaining: Vec<usize> = Vec::with_capacity(trace.len());
        let mut completions: Vec<u64> = Vec::with_capacity(trace.len());
        let mut last_arrival = 0u64;
        for (line, record) in trace.iter().enumerate() {
            if record.timestamp_ns < last_arrival {
                return Err(Error::TraceOrder {
                    line: line + 1,
                    message: "trace must be sorted by timestamp".into(),
                });
            }
            last_arrival = record.timestamp_ns;
            let arrival_tick = ns_to_cycles_floor(record.timestamp_ns as f64, self.dev.tck_ns);
            let req_idx = requests.len();
            let chunks =
                split_into_bursts(record.address, record.size_bytes, self.map.burst_bytes());
            // reject requests that run past the end of memory
            let last_chunk = *chunks.last().expect("at least one burst");
            self.map.decode(last_chunk)?;
            for chunk in &chunks {
                let loc = self.map.decode(*chunk)?;
                bursts.push(Burst {
                    req: req_idx,
                    rank: loc.rank,
                    bank: loc.bank,
                    row: loc.row,
                    kind: record.kind,
                    seq: bursts.len(),
                    phase: Phase::NeedsColumn, // assigned at service start
                });
            }
            remaining.push(chunks.len());
            completions.push(0);
            requests.push(MemoryRequest {
                arrival_tick,
                kind: record.kind,
                address: record.address,
                size_bytes: record.size_bytes,
                completion_tick: None,
            });
        }

        let arrival_of = |b: &Burst| requests[b.req].arrival_tick;
        let end_limit = min_end_cycle.unwrap_or(0);

        let mut next_burst_to_admit = 0usize; // bursts arrive in trace order
        let mut admitted: Vec<usize> = Vec::new();
        let mut now = 0u64;
        let mut data_end = 0u64;

        loop {
            // admit arrivals
            while next_burst_to_admit < bursts.len()
                && arrival_of(&bursts[next_burst_to_admit]) <= now
            {
                admitted.push(next_burst_to_admit);
                next_burst_to_admit += 1;
            }

            self.drive_refresh(now)?;
            self.issue_ready(
                now,
                &mut bursts,
                &mut admitted,
                &mut remaining,
                &mut completions,
                &mut data_end,
            )?;

            let drained = next_burst_to_admit == bursts.len()
                && admitted.is_empty()
                && self.active_count() == 0;
            let refresh_work = self.ranks.iter().any(|r| {
                r.refresh_ready_at.is_some()
                    || r.next_refresh_due.map_or(false, |due| {
                        if drained {
                            due <= end_limit
                        } else {
                            true
                        }
                    })
            });
            if drained && !refresh_work {
                break;
            }

            let mut next_time = u64::MAX;
            let mut consider = |t: u64| {
                if t > now {
                    next_time = next_time.min(t);
                }
            };
            if next_burst_to_admit < bursts.len() {
                consider(arrival_of(&bursts[next_burst_to_admit]));
            }
            for rank in &self.ranks {
                consider(rank.avail_at);
                if let Some(ready) = rank.refresh_ready_at {
                    consider(ready);
                }
                if let Some(due) = rank.next_refresh_due {
                    if !drained || due <= end_limit {
                        consider(due);
                    }
                }
                for bank in &rank.power.banks {
                    consider(bank.busy_until_tick);
                }
            }
            consider(self.next_col_allowed);
            if next_time == u64::MAX {
                if drained {
                    break;
                }
                return Err(Error::internal(format!(
                    "scheduler stalled at tick {now} with work pending"
                )));
            }
            now = next_time;
        }

        for (idx, req) in requests.iter_mut().enumerate() {
            req.completion_tick = Some(completions[idx]);
        }
        let end_tick = data_end.max(end_limit).max(now);
        let state_times = self
            .ranks
            .iter()
            .map(|r| r.power.state_time_report(end_tick))
            .collect();
        log::debug!(
            "simulation of {} requests finished at tick {end_tick} ({} commands)",
            requests.len(),
            self.log.len()
        );
        Ok(SimOutput {
            log: self.log,
            requests,
            end_tick,
            n_row_hits: self.n_row_hits,
            n_row_misses: self.n_row_misses,
            n_rd_bursts: self.n_rd_bursts,
            n_wr_bursts: self.n_wr_bursts,
            state_times,
        })
    }

    fn active_count(&self) -> usize {
        self.ranks
            .iter()
            .map(|r| r.active.iter().filter(|a| a.is_some()).count())
            .sum()
    }

    /// Stage DRAM auto-refresh: once due, wait for in-flight bursts, issue
    /// precharges for open banks, then the REF itself.
    fn drive_refresh(&mut self, now: u64) -> Result<()> {
        if self.dev.kind != DeviceKind::Dram {
            return Ok(());
        }
        for rank_idx in 0..self.ranks.len() {
            let rank = &mut self.ranks[rank_idx];
            if let Some(ready) = rank.refresh_ready_at {
                if ready <= now {
                    rank.refresh_ready_at = None;
                    self.issue_ref(rank_idx as u32, now)?;
                }
                continue;
            }
            match rank.next_refresh_due {
                Some(due) if due <= now => {}
                _ => continue,
            }
            if rank.avail_at > now
                || rank.active.iter().any(|a| a.is_some())
                || rank.power.banks.iter().any(|b| b.busy_until_tick > now)
            {
                continue; // in-flight work must finish first
            }
            let open: Vec<u32> = rank
                .power
                .banks
                .iter()
                .enumerate()
                .filter_map(|(i, b)| b.open_row.is_some().then_some(i as u32))
                .collect();
            if open.is_empty() {
                self.issue_ref(rank_idx as u32, now)?;
            } else {
                for bank in open {
                    let cmd = Command::simple(CommandKind::Pre, rank_idx as u32, bank, now);
                    let rank = &mut self.ranks[rank_idx];
                    rank.power.banks[bank as usize].precharge();
                    rank.power.banks[bank as usize].busy_until_tick = now + self.dev.trp();
                    rank.power.transition(&cmd, now)?;
                    self.log.push(cmd);
                }
                self.ranks[rank_idx].refresh_ready_at = Some(now + self.dev.trp());
            }
        }
        Ok(())
    }

    fn issue_ref(&mut self, rank_idx: u32, now: u64) -> Result<()> {
        let trfc = self.dev.trfc();
        let rank = &mut self.ranks[rank_idx as usize];
        let flushed = rank.power.flush_all()?;
        let cmd = Command::refresh(CommandKind::Ref, rank_idx, now, flushed);
        rank.power.transition(&cmd, now)?;
        rank.avail_at = now + trfc;
        for bank in &mut rank.power.banks {
            bank.busy_until_tick = now + trfc;
        }
        if let Some(due) = rank.next_refresh_due {
            let trefi = self.dev.trefi().expect("DRAM has tREFI");
            rank.next_refresh_due = Some(due + trefi);
        }
        self.log.push(cmd);
        log::trace!("REF issued on rank {rank_idx} at tick {now}");
        Ok(())
    }

    fn issue_ready(
        &mut self,
        now: u64,
        bursts: &mut [Burst],
        admitted: &mut Vec<usize>,
        remaining: &mut [usize],
        completions: &mut [u64],
        data_end: &mut u64,
    ) -> Result<()> {
        // continue in-flight bursts first; they own their banks
        for rank_idx in 0..self.ranks.len() {
            for bank_idx in 0..self.ranks[rank_idx].active.len() {
                if let Some(burst_idx) = self.ranks[rank_idx].active[bank_idx] {
                    if self.ranks[rank_idx].power.banks[bank_idx].busy_until_tick <= now {
                        self.step_burst(
                            burst_idx, now, bursts, remaining, completions, data_end,
                        )?;
                    }
                }
            }
        }

        // start new bursts
        loop {
            let candidate = match self.policy {
                SchedulerPolicy::Fcfs => {
                    let head = admitted.first().copied();
                    head.filter(|idx| self.can_start(&bursts[*idx], now))
                }
                SchedulerPolicy::FrFcfs => {
                    // first ready: any burst whose open row matches goes
                    // ahead of older conflicting ones; ties fall back to
                    // arrival order
                    let mut best: Option<(bool, usize, usize)> = None; // (hit, seq, idx)
                    for &idx in admitted.iter() {
                        let b = &bursts[idx];
                        if !self.can_start(b, now) {
                            continue;
                        }
                        let open =
                            self.ranks[b.rank as usize].power.banks[b.bank as usize].open_row;
                        let hit = open == Some(b.row);
                        best = match best {
                            Some((best_hit, best_seq, _))
                                if (best_hit, std::cmp::Reverse(best_seq))
                                    >= (hit, std::cmp::Reverse(b.seq)) =>
                            {
                                best
                            }
                            _ => Some((hit, b.seq, idx)),
                        };
                    }
                    best.map(|(_, _, idx)| idx)
                }
            };
            let Some(burst_idx) = candidate else { break };
            admitted.retain(|i| *i != burst_idx);
            self.start_burst(burst_idx, bursts);
            self.step_burst(burst_idx, now, bursts, remaining, completions, data_end)?;
        }
        Ok(())
    }

    fn can_start(&self, burst: &Burst, now: u64) -> bool {
        let rank = &self.ranks[burst.rank as usize];
        let refresh_blocked = rank.refresh_ready_at.is_some()
            || rank.next_refresh_due.map_or(false, |due| due <= now)
            || rank.avail_at > now;
        !refresh_blocked
            && rank.active[burst.bank as usize].is_none()
            && rank.power.banks[burst.bank as usize].busy_until_tick <= now
    }

    fn start_burst(&mut self, burst_idx: usize, bursts: &mut [Burst]) {
        let burst = &mut bursts[burst_idx];
        let rank = &mut self.ranks[burst.rank as usize];
        let bank = &rank.power.banks[burst.bank as usize];
        burst.phase = match bank.open_row {
            Some(row) if row == burst.row => {
                self.n_row_hits += 1;
                Phase::NeedsColumn
            }
            Some(_) => {
                self.n_row_misses += 1;
                Phase::NeedsPre
            }
            None => {
                self.n_row_misses += 1;
                Phase::NeedsAct
            }
        };
        rank.active[burst.bank as usize] = Some(burst_idx);
    }

    fn step_burst(
        &mut self,
        burst_idx: usize,
        now: u64,
        bursts: &mut [Burst],
        remaining: &mut [usize],
        completions: &mut [u64],
        data_end: &mut u64,
    ) -> Result<()> {
        let burst = &mut bursts[burst_idx];
        let rank_idx = burst.rank as usize;
        let bank_idx = burst.bank as usize;
        match burst.phase {
            Phase::NeedsPre => {
                let cmd = Command::simple(CommandKind::Pre, burst.rank, burst.bank, now);
                let rank = &mut self.ranks[rank_idx];
                rank.power.banks[bank_idx].precharge();
                rank.power.banks[bank_idx].busy_until_tick = now + self.dev.trp();
                rank.power.transition(&cmd, now)?;
                self.log.push(cmd);
                burst.phase = Phase::NeedsAct;
            }
            Phase::NeedsAct => {
                let rank = &mut self.ranks[rank_idx];
                let bank = &mut rank.power.banks[bank_idx];
                let precharged = bank.is_precharged();
                debug_assert!(precharged, "NeedsAct on a bank with an open row");
                let (kind, extra) = match self.dev.kind {
                    DeviceKind::Stt => bank.select_activate(burst.row, self.dev.tst())?,
                    DeviceKind::Dram => {
                        bank.activate_volatile(burst.row)?;
                        (CommandKind::Act, 0)
                    }
                };
                let mut cmd = match kind {
                    CommandKind::ActSt => {
                        Command::act_st(burst.rank, burst.bank, burst.row, now, extra)
                    }
                    _ => Command::act(burst.rank, burst.bank, burst.row, now),
                };
                cmd.precharged = precharged;
                // store first, then the row opens
                bank.busy_until_tick = now + extra + self.dev.trcd();
                rank.power.transition(&cmd, now)?;
                self.log.push(cmd);
                burst.phase = Phase::NeedsColumn;
            }
            Phase::NeedsColumn => {
                if self.next_col_allowed > now {
                    return Ok(()); // channel busy; retried at next event
                }
                let (cmd_kind, completion, busy_until) = match burst.kind {
                    AccessKind::Read => {
                        let done = now + self.dev.tcl() + self.dev.tburst();
                        (CommandKind::Rd, done, done)
                    }
                    AccessKind::Write => {
                        // posted write: complete for the requester at issue
                        let busy = now + self.dev.tcwl() + self.dev.tburst() + self.dev.twr();
                        (CommandKind::Wr, now, busy)
                    }
                };
                let cmd = Command::simple(cmd_kind, burst.rank, burst.bank, now);
                let rank = &mut self.ranks[rank_idx];
                rank.power.banks[bank_idx].busy_until_tick = busy_until;
                rank.power.transition(&cmd, now)?;
                self.log.push(cmd);
                self.next_col_allowed = now + self.dev.tburst();
                match burst.kind {
                    AccessKind::Read => {
                        self.n_rd_bursts += 1;
                        *data_end = (*data_end).max(completion);
                    }
                    AccessKind::Write => {
                        self.n_wr_bursts += 1;
                        *data_end =
                            (*data_end).max(now + self.dev.tcwl() + self.dev.tburst());
                    }
                }
                let req = burst.req;
                remaining[req] -= 1;
                completions[req] = completions[req].max(completion);
                self.ranks[rank_idx].active[bank_idx] = None;
            }
        }
        Ok(())
    }
}
