//! Property tests for the simulator's structural invariants.

use proptest::prelude::*;

use memsim_core::controller::{AddrMapPolicy, AddressMap, Controller, SchedulerPolicy};
use memsim_core::device::{DeviceParams, MtjParams};
use memsim_core::memstate::{BankState, CommandKind, StoringState};
use memsim_core::trace::{
    generate, parse_trace, serialize_trace, AccessKind, SyntheticSpec, TracePattern, TraceRecord,
};

fn stt() -> DeviceParams {
    DeviceParams::from_config_text(include_str!("../../../configs/stt_1333_4x16.cfg")).unwrap()
}

fn mtj_strategy() -> impl Strategy<Value = MtjParams> {
    (
        1e4..2e6f64,    // m_s
        1e3..1e6f64,    // h_k
        0.001..0.5f64,  // alpha
        0.1..1.0f64,    // eta
        5e-10..5e-9f64, // t
        1e-8..2e-7f64,  // d
        1e8..1e10f64,   // f_0
        200.0..400.0f64,
    )
        .prop_map(|(m_s, h_k, alpha, eta, t, d, f_0, temperature)| MtjParams {
            m_s,
            h_k,
            alpha,
            eta,
            t,
            d,
            f_0,
            temperature,
        })
}

proptest! {
    // I_c collapses to I_c0 when the pulse width is the inverse attempt
    // frequency, for any valid parameter set.
    #[test]
    fn critical_current_reduces_to_ic0(p in mtj_strategy()) {
        p.validate().unwrap();
        let ic0 = p.critical_current_zero().unwrap();
        let ic = p.critical_current(1.0 / p.f_0).unwrap();
        prop_assert!((ic - ic0).abs() <= 1e-12 * ic0.abs());
    }

    #[test]
    fn thermal_stability_is_linear_in_each_field(p in mtj_strategy(), factor in 1.5..4.0f64) {
        let base = p.thermal_stability().unwrap();
        for scaled in [
            MtjParams { m_s: p.m_s * factor, ..p.clone() },
            MtjParams { h_k: p.h_k * factor, ..p.clone() },
            MtjParams { t: p.t * factor, ..p.clone() },
            MtjParams { d: p.d * factor, ..p.clone() },
        ] {
            let got = scaled.thermal_stability().unwrap();
            prop_assert!((got - base * factor).abs() <= 1e-9 * got.abs());
        }
        let hot = MtjParams { temperature: p.temperature * factor, ..p.clone() };
        let got = hot.thermal_stability().unwrap();
        prop_assert!((got - base / factor).abs() <= 1e-9 * got.abs());
    }

    // ACT_ST is chosen exactly when the brute-force predicate over the
    // pre-call state says so.
    #[test]
    fn select_activate_matches_predicate(
        buffered in any::<bool>(),
        last_row in 0u32..64,
        row in 0u32..64,
        tst in 1u64..1000,
    ) {
        let storing = if buffered { StoringState::Buffer } else { StoringState::Persistent };
        let mut bank = BankState {
            storing_state: storing,
            last_row,
            ..BankState::new()
        };
        let expect_store = last_row != row && storing == StoringState::Buffer;
        let (kind, extra) = bank.select_activate(row, tst).unwrap();
        prop_assert_eq!(kind == CommandKind::ActSt, expect_store);
        prop_assert_eq!(extra, if expect_store { tst } else { 0 });
        prop_assert_eq!(bank.storing_state, StoringState::Buffer);
        prop_assert_eq!(bank.last_row, row);
        prop_assert_eq!(bank.open_row, Some(row));
    }

    #[test]
    fn address_map_round_trips(
        rank in 0u32..1,
        bank in 0u32..8,
        row in 0u32..8192,
        column in 0u32..1024,
        policy in prop_oneof![Just(AddrMapPolicy::RoRaBaCo), Just(AddrMapPolicy::RoBaRaCo)],
    ) {
        let map = AddressMap::new(&stt(), policy);
        let addr = map.encode(rank, bank, row, column);
        let loc = map.decode(addr).unwrap();
        prop_assert_eq!((loc.rank, loc.bank, loc.row, loc.column), (rank, bank, row, column));
    }

    #[test]
    fn trace_serialization_round_trips(
        deltas in prop::collection::vec((0u64..500, any::<bool>(), 0u64..1u64 << 27, 1u32..256), 0..60),
    ) {
        let mut ts = 0;
        let records: Vec<TraceRecord> = deltas
            .into_iter()
            .map(|(dt, write, addr, size)| {
                ts += dt;
                TraceRecord {
                    timestamp_ns: ts,
                    kind: if write { AccessKind::Write } else { AccessKind::Read },
                    address: addr,
                    size_bytes: size,
                }
            })
            .collect();
        let text = serialize_trace(&records);
        prop_assert_eq!(parse_trace(&text).unwrap(), records);
    }

    // every rank's dwell times account for every simulated cycle
    #[test]
    fn state_times_conserve_cycles(seed in any::<u64>(), count in 1u64..120, gap in 2u64..40) {
        let dev = stt();
        let map = AddressMap::new(&dev, AddrMapPolicy::RoRaBaCo);
        let spec = SyntheticSpec {
            pattern: TracePattern::UniformRandom,
            count,
            write_fraction: 0.3,
            inter_arrival_ns: gap,
            seed,
        };
        let trace = generate(&spec, &map).unwrap();
        let out = Controller::new(dev, AddrMapPolicy::RoRaBaCo, SchedulerPolicy::FrFcfs)
            .run(&trace, None)
            .unwrap();
        for times in &out.state_times {
            prop_assert_eq!(times.total(), out.end_tick);
        }
    }

    // a trace that never leaves one row activates once and only once
    #[test]
    fn single_row_traffic_never_stores(seed in any::<u64>(), count in 2u64..200) {
        let dev = stt();
        let map = AddressMap::new(&dev, AddrMapPolicy::RoRaBaCo);
        let spec = SyntheticSpec {
            pattern: TracePattern::SameRow,
            count,
            write_fraction: 0.5,
            inter_arrival_ns: 9,
            seed,
        };
        let trace = generate(&spec, &map).unwrap();
        let out = Controller::new(dev, AddrMapPolicy::RoRaBaCo, SchedulerPolicy::FrFcfs)
            .run(&trace, None)
            .unwrap();
        prop_assert_eq!(out.log.count(CommandKind::Act), 1);
        prop_assert_eq!(out.log.count(CommandKind::ActSt), 0);
        prop_assert_eq!(out.n_row_hits, count - 1);
    }
}
