//! Per-bank and per-rank device state: storing-state tracking, selection
//! between ACT and ACT_ST, flush-on-refresh semantics, and the rank power
//! state machine with per-state dwell time accounting.

use crate::device::DeviceParams;
use crate::error::{Error, Result};

/// Persistence of the data currently held in a bank's page buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoringState {
    /// Page buffer holds data not yet written back to the persistent array.
    Buffer,
    /// Page buffer contents are saved to the persistent array.
    Persistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PowerState {
    PwrIdle,
    PwrAct,
    PwrActSt,
    PwrRef,
    PwrSref,
    PwrPdn,
    PwrPup,
}

impl PowerState {
    pub const ALL: [PowerState; 7] = [
        PowerState::PwrIdle,
        PowerState::PwrAct,
        PowerState::PwrActSt,
        PowerState::PwrRef,
        PowerState::PwrSref,
        PowerState::PwrPdn,
        PowerState::PwrPup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PowerState::PwrIdle => "PWR_IDLE",
            PowerState::PwrAct => "PWR_ACT",
            PowerState::PwrActSt => "PWR_ACT_ST",
            PowerState::PwrRef => "PWR_REF",
            PowerState::PwrSref => "PWR_SREF",
            PowerState::PwrPdn => "PWR_PDN",
            PowerState::PwrPup => "PWR_PUP",
        }
    }

    fn idx(self) -> usize {
        match self {
            PowerState::PwrIdle => 0,
            PowerState::PwrAct => 1,
            PowerState::PwrActSt => 2,
            PowerState::PwrRef => 3,
            PowerState::PwrSref => 4,
            PowerState::PwrPdn => 5,
            PowerState::PwrPup => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommandKind {
    Act,
    ActSt,
    Rd,
    Wr,
    Pre,
    Ref,
    Sref,
    PdnEnter,
    PdnExit,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Act => "ACT",
            CommandKind::ActSt => "ACT_ST",
            CommandKind::Rd => "RD",
            CommandKind::Wr => "WR",
            CommandKind::Pre => "PRE",
            CommandKind::Ref => "REF",
            CommandKind::Sref => "SREF",
            CommandKind::PdnEnter => "PDN_ENTER",
            CommandKind::PdnExit => "PDN_EXIT",
        }
    }
}

/// A timestamped device command, the unit the power model consumes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub kind: CommandKind,
    pub rank: u32,
    pub bank: u32,
    /// Row index; meaningful for ACT / ACT_ST.
    pub row: u32,
    pub issue_tick: u64,
    /// Store time in cycles for ACT_ST, 0 otherwise.
    pub extra_delay: u64,
    /// Whether the target bank was precharged when an ACT / ACT_ST was
    /// issued; the power model asserts this.
    pub precharged: bool,
    /// Banks whose page buffer this REF / SREF flushed to the array.
    pub flushed_banks: Vec<u32>,
}

impl Command {
    pub fn act(rank: u32, bank: u32, row: u32, issue_tick: u64) -> Self {
        Command {
            kind: CommandKind::Act,
            rank,
            bank,
            row,
            issue_tick,
            extra_delay: 0,
            precharged: true,
            flushed_banks: Vec::new(),
        }
    }

    pub fn act_st(rank: u32, bank: u32, row: u32, issue_tick: u64, tst_cycles: u64) -> Self {
        Command {
            kind: CommandKind::ActSt,
            extra_delay: tst_cycles,
            ..Command::act(rank, bank, row, issue_tick)
        }
    }

    pub fn simple(kind: CommandKind, rank: u32, bank: u32, issue_tick: u64) -> Self {
        Command {
            kind,
            rank,
            bank,
            row: 0,
            issue_tick,
            extra_delay: 0,
            precharged: false,
            flushed_banks: Vec::new(),
        }
    }

    pub fn refresh(kind: CommandKind, rank: u32, issue_tick: u64, flushed_banks: Vec<u32>) -> Self {
        debug_assert!(matches!(kind, CommandKind::Ref | CommandKind::Sref));
        Command {
            kind,
            rank,
            bank: 0,
            row: 0,
            issue_tick,
            extra_delay: 0,
            precharged: false,
            flushed_banks,
        }
    }
}

/// State of a single bank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BankState {
    pub storing_state: StoringState,
    /// Row of the most recent activation.
    pub last_row: u32,
    /// Currently open row; `None` means precharged.
    pub open_row: Option<u32>,
    /// Earliest cycle at which the bank accepts a new command.
    pub busy_until_tick: u64,
}

impl Default for BankState {
    fn default() -> Self {
        BankState {
            storing_state: StoringState::Persistent,
            last_row: 0,
            open_row: None,
            busy_until_tick: 0,
        }
    }
}

impl BankState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_precharged(&self) -> bool {
        self.open_row.is_none()
    }

    /// Pick ACT or ACT_ST for an activation of `row`.
    ///
    /// ACT_ST (with `tst_cycles` of extra delay) is selected exactly when the
    /// requested row differs from the last accessed one and the page buffer
    /// holds unsaved data. Afterwards the bank records `row` as last accessed
    /// and open, and its buffer is marked unsaved.
    pub fn select_activate(&mut self, row: u32, tst_cycles: u64) -> Result<(CommandKind, u64)> {
        if let Some(open) = self.open_row {
            return Err(Error::Precondition {
                message: format!("activation of row {row} while row {open} is open"),
            });
        }
        let (kind, extra) = if self.last_row != row && self.storing_state == StoringState::Buffer {
            (CommandKind::ActSt, tst_cycles)
        } else {
            (CommandKind::Act, 0)
        };
        self.last_row = row;
        self.storing_state = StoringState::Buffer;
        self.open_row = Some(row);
        Ok((kind, extra))
    }

    /// Plain activation for volatile (DRAM) banks; no storing-state tracking.
    pub fn activate_volatile(&mut self, row: u32) -> Result<()> {
        if let Some(open) = self.open_row {
            return Err(Error::Precondition {
                message: format!("activation of row {row} while row {open} is open"),
            });
        }
        self.last_row = row;
        self.open_row = Some(row);
        Ok(())
    }

    /// Store the page buffer to the persistent array. Returns whether a store
    /// actually happened (`false` when already persistent).
    pub fn store(&mut self) -> bool {
        match self.storing_state {
            StoringState::Buffer => {
                self.storing_state = StoringState::Persistent;
                true
            }
            StoringState::Persistent => false,
        }
    }

    pub fn precharge(&mut self) {
        self.open_row = None;
    }
}

/// Per-state dwell times in cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StateTimes([u64; 7]);

impl StateTimes {
    pub fn get(&self, state: PowerState) -> u64 {
        self.0[state.idx()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PowerState, u64)> + '_ {
        PowerState::ALL.iter().map(|s| (*s, self.0[s.idx()]))
    }

    fn add(&mut self, state: PowerState, cycles: u64) {
        self.0[state.idx()] += cycles;
    }
}

/// Auto-advance latencies for transitions that complete on their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutoTimings {
    /// REF occupancy.
    pub trfc: u64,
    /// Power-down exit to idle.
    pub txp: u64,
    /// Self-refresh exit to idle.
    pub txs: u64,
}

impl AutoTimings {
    pub fn from_device(dev: &DeviceParams) -> Self {
        AutoTimings {
            trfc: dev.trfc(),
            txp: dev.txp(),
            txs: dev.txs(),
        }
    }
}

/// Rank-level power automaton plus the rank's banks.
///
/// The automaton starts in PWR_IDLE at tick 0. Transitions that finish on
/// their own (the store window of ACT_ST, REF completion, power-up) are kept
/// as a pending event and applied once simulated time passes them.
#[derive(Debug, Clone)]
pub struct RankState {
    pub power_state: PowerState,
    pub banks: Vec<BankState>,
    pub last_transition_tick: u64,
    state_time: StateTimes,
    open_banks: u32,
    pending: Option<(u64, PowerState)>,
    auto: AutoTimings,
}

impl RankState {
    pub fn new(banks: usize, auto: AutoTimings) -> Self {
        RankState {
            power_state: PowerState::PwrIdle,
            banks: vec![BankState::new(); banks],
            last_transition_tick: 0,
            state_time: StateTimes::default(),
            open_banks: 0,
            pending: None,
            auto,
        }
    }

    fn accumulate(&mut self, until: u64) {
        debug_assert!(until >= self.last_transition_tick);
        self.state_time
            .add(self.power_state, until - self.last_transition_tick);
        self.last_transition_tick = until;
    }

    fn switch(&mut self, next: PowerState, at: u64) {
        self.accumulate(at);
        self.power_state = next;
    }

    /// Apply a pending auto-advance event if simulated time has passed it.
    fn apply_pending(&mut self, now: u64) {
        if let Some((at, next)) = self.pending {
            if at <= now {
                self.pending = None;
                self.switch(next, at);
            }
        }
    }

    /// Drive the automaton with a command issued at `now`.
    ///
    /// RD / WR are accepted as no-ops while any bank is active; they carry no
    /// power-state arc of their own.
    pub fn transition(&mut self, cmd: &Command, now: u64) -> Result<PowerState> {
        self.apply_pending(now);
        if now < self.last_transition_tick {
            return Err(Error::internal(format!(
                "command {} at tick {now} precedes last transition at {}",
                cmd.kind.name(),
                self.last_transition_tick
            )));
        }
        use CommandKind as K;
        use PowerState as P;
        let state = self.power_state;
        let illegal = || Error::IllegalTransition {
            state: state.name(),
            command: cmd.kind.name(),
        };
        match (state, cmd.kind) {
            (P::PwrIdle, K::Act) => {
                self.open_banks += 1;
                self.switch(P::PwrAct, now);
            }
            (P::PwrAct | P::PwrActSt, K::Act) => {
                self.open_banks += 1;
            }
            (P::PwrIdle | P::PwrAct | P::PwrActSt, K::ActSt) => {
                self.open_banks += 1;
                let store_done = now + cmd.extra_delay;
                let store_done = match self.pending {
                    Some((at, P::PwrAct)) => at.max(store_done),
                    _ => store_done,
                };
                self.pending = Some((store_done, P::PwrAct));
                if state != P::PwrActSt {
                    self.switch(P::PwrActSt, now);
                }
            }
            (P::PwrAct | P::PwrActSt, K::Rd | K::Wr) => {}
            (P::PwrAct | P::PwrActSt, K::Pre) => {
                if self.open_banks == 0 {
                    return Err(illegal());
                }
                self.open_banks -= 1;
                if self.open_banks == 0 {
                    if state == P::PwrActSt {
                        // a store is in flight; the bank that triggered it
                        // cannot have been precharged yet
                        return Err(illegal());
                    }
                    self.switch(P::PwrIdle, now);
                }
            }
            (P::PwrIdle, K::Ref) => {
                self.pending = Some((now + self.auto.trfc, P::PwrIdle));
                self.switch(P::PwrRef, now);
            }
            (P::PwrIdle, K::Sref) => {
                self.switch(P::PwrSref, now);
            }
            (P::PwrIdle, K::PdnEnter) => {
                self.switch(P::PwrPdn, now);
            }
            (P::PwrSref, K::PdnExit) => {
                self.pending = Some((now + self.auto.txs, P::PwrIdle));
                self.switch(P::PwrPup, now);
            }
            (P::PwrPdn, K::PdnExit) => {
                self.pending = Some((now + self.auto.txp, P::PwrIdle));
                self.switch(P::PwrPup, now);
            }
            _ => return Err(illegal()),
        }
        Ok(self.power_state)
    }

    /// Store every bank still in the buffer state; returns the flushed bank
    /// indices. A return of zero banks means the triggering REF / SREF was
    /// not effective. All banks must be precharged.
    pub fn flush_all(&mut self) -> Result<Vec<u32>> {
        if let Some(open) = self.banks.iter().position(|b| !b.is_precharged()) {
            return Err(Error::Precondition {
                message: format!("flush requested while bank {open} has an open row"),
            });
        }
        Ok(self
            .banks
            .iter_mut()
            .enumerate()
            .filter_map(|(i, b)| b.store().then_some(i as u32))
            .collect())
    }

    /// Accumulated per-state times including the interval in progress at
    /// `now`. The values always sum to `now`.
    pub fn state_time_report(&self, now: u64) -> StateTimes {
        let mut times = self.state_time;
        let mut last = self.last_transition_tick;
        let mut current = self.power_state;
        if let Some((at, next)) = self.pending {
            if at <= now {
                times.add(current, at - last);
                last = at;
                current = next;
            }
        }
        debug_assert!(now >= last, "state time query at {now} before {last}");
        times.add(current, now.saturating_sub(last));
        times
    }

    pub fn open_banks(&self) -> u32 {
        self.open_banks
    }
}
