//! Thread fan-out for the worker-partitioned core routines. Each worker owns
//! its generator stream, so results match the sequential core functions.

use std::thread;

use qgame_core::game::GameParams;
use qgame_core::search::{finish_random, maximize_min_ccc_margin, random_search_worker, Method, SearchConfig, SearchResult};
use qgame_core::simulate::{simulate_worker, summarize, SimulationConfig, SimulationResult, Tally};
use qgame_core::Result;

pub fn search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    if config.method == Method::Lp || config.workers == 1 {
        return maximize_min_ccc_margin(config);
    }
    let parts = thread::scope(|s| {
        let handles: Vec<_> =
            (0..config.workers).map(|w| s.spawn(move || random_search_worker(config, w, None))).collect();
        handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect::<Result<Vec<_>>>()
    })?;
    finish_random(config, parts)
}

pub fn simulate(params: &GameParams, config: &SimulationConfig) -> Result<SimulationResult> {
    config.validate()?;
    let tally = thread::scope(|s| {
        let handles: Vec<_> = (0..config.workers).map(|w| s.spawn(move || simulate_worker(config, w))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .fold(Tally::new(), |acc, t| acc.merge(&t))
    });
    Ok(summarize(params, config, &tally))
}
