//! Fifty-cell progress bar on stderr.

use std::io::Write;
use std::sync::Mutex;

const CELLS: usize = 50;

/// Prints `|` up front, a `+` as each fiftieth of the work completes, and
/// `| 100%` at the end. Safe to tick from worker threads.
pub struct ProgressBar {
    total: usize,
    state: Mutex<State>,
}

struct State {
    done: usize,
    printed: usize,
}

impl ProgressBar {
    pub fn start(total: usize) -> Self {
        eprint!("  |");
        let _ = std::io::stderr().flush();
        Self {
            total: total.max(1),
            state: Mutex::new(State { done: 0, printed: 0 }),
        }
    }

    pub fn tick(&self) {
        let mut state = self.state.lock().unwrap();
        state.done += 1;
        let target = state.done * CELLS / self.total;
        if target > state.printed {
            let mut err = std::io::stderr();
            for _ in state.printed..target.min(CELLS) {
                let _ = write!(err, "+");
            }
            let _ = err.flush();
            state.printed = target.min(CELLS);
        }
    }

    pub fn finish(&self) {
        let mut state = self.state.lock().unwrap();
        let mut err = std::io::stderr();
        for _ in state.printed..CELLS {
            let _ = write!(err, "+");
        }
        state.printed = CELLS;
        let _ = writeln!(err, "| 100%");
        let _ = err.flush();
    }
}
