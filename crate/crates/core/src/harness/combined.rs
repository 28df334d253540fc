//! Portfolio raced against an external SMT solver process.
//!
//! The external command receives the problem path as its last argument and
//! runs in its own process group so that it and its children can be killed
//! together. UNSAT can only come from the external solver.

use std::fmt;
use std::io::Read;
use std::os::unix::process::CommandExt;
use std::path::Path;
use std::process::{Command, ExitStatus, Stdio};
use std::sync::{mpsc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::{HarnessError, Problem};
use crate::optimize::StopToken;
use crate::portfolio::{solve_with_stop, Model, PortfolioConfig, PortfolioError, SolveOutcome, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExternalVerdict {
    Sat,
    Unsat,
    Unknown,
}

/// First line that is exactly `sat`, `unsat`, or `unknown` after trimming.
pub fn parse_external_verdict(stdout: &str) -> ExternalVerdict {
    for line in stdout.lines() {
        match line.trim() {
            "sat" => return ExternalVerdict::Sat,
            "unsat" => return ExternalVerdict::Unsat,
            "unknown" => return ExternalVerdict::Unknown,
            _ => {}
        }
    }
    log::warn!("external solver printed no verdict: {:?}", stdout.chars().take(200).collect::<String>());
    ExternalVerdict::Unknown
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CombinedVerdict {
    Sat,
    Unsat,
    Unknown,
    Timeout,
}

impl fmt::Display for CombinedVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CombinedVerdict::Sat => "sat",
            CombinedVerdict::Unsat => "unsat",
            CombinedVerdict::Unknown => "unknown",
            CombinedVerdict::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Portfolio,
    External,
}

#[derive(Debug, Clone)]
pub struct CombinedOutcome {
    pub verdict: CombinedVerdict,
    pub source: Source,
    pub wall_time: Duration,
    /// Present when the portfolio found the model.
    pub model: Option<Model>,
    pub external_crashed: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CombinedConfig {
    pub portfolio: PortfolioConfig,
    /// Shell command; the problem path is appended as one argument.
    pub external: String,
    pub timeout: Duration,
}

enum Event {
    Portfolio(Result<SolveOutcome, PortfolioError>),
    External(Result<(ExitStatus, String), std::io::Error>),
}

/// External process handle that can be killed until it has been reaped.
struct Group {
    pid: i32,
    reaped: Mutex<bool>,
}

impl Group {
    fn kill(&self) {
        let reaped = self.reaped.lock().unwrap_or_else(|e| e.into_inner());
        if !*reaped {
            // SAFETY: plain syscall; the group id is still ours because
            // the leader has not been reaped.
            unsafe {
                libc::kill(-self.pid, libc::SIGKILL);
            }
        }
    }
}

fn crashed(status: &ExitStatus, stdout: &str) -> bool {
    use std::os::unix::process::ExitStatusExt;
    if status.signal().is_some() {
        return true;
    }
    !status.success() && !stdout.lines().any(|l| matches!(l.trim(), "sat" | "unsat" | "unknown"))
}

pub fn run_combined(path: &Path, cfg: &CombinedConfig) -> Result<CombinedOutcome, HarnessError> {
    let started = Instant::now();
    let problem = Problem::load(path)?;
    let mut pcfg = cfg.portfolio.clone();
    pcfg.wall_timeout = Some(pcfg.wall_timeout.map_or(cfg.timeout, |t| t.min(cfg.timeout)));

    let mut child = Command::new("sh")
        .arg("-c")
        .arg(format!("exec {} \"$1\"", cfg.external))
        .arg("fpsat-external")
        .arg(path)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .process_group(0)
        .spawn()
        .map_err(HarnessError::Spawn)?;
    let group = Group {
        pid: child.id() as i32,
        reaped: Mutex::new(false),
    };
    let mut stdout = child.stdout.take().expect("piped stdout");
    let stop = StopToken::new();
    let deadline = started + cfg.timeout;
    let mut notes = Vec::new();

    let decided = thread::scope(|scope| {
        let (tx, rx) = mpsc::channel();
        {
            let tx = tx.clone();
            let (problem, pcfg, stop) = (&problem, &pcfg, &stop);
            scope.spawn(move || {
                let out = solve_with_stop(&problem.formula, &problem.program, pcfg, stop);
                let _ = tx.send(Event::Portfolio(out));
            });
        }
        {
            let group = &group;
            scope.spawn(move || {
                let mut text = String::new();
                let read = stdout.read_to_string(&mut text);
                let status = loop {
                    let mut reaped = group.reaped.lock().unwrap_or_else(|e| e.into_inner());
                    match child.try_wait() {
                        Ok(Some(s)) => {
                            *reaped = true;
                            break Ok(s);
                        }
                        Ok(None) => {}
                        Err(e) => break Err(e),
                    }
                    drop(reaped);
                    thread::sleep(Duration::from_millis(5));
                };
                let ev = match (read, status) {
                    (Ok(_), Ok(s)) => Ok((s, text)),
                    (Err(e), _) | (_, Err(e)) => Err(e),
                };
                let _ = tx.send(Event::External(ev));
            });
        }

        let mut portfolio_done: Option<bool> = None;
        let mut external_done = false;
        let mut crashed_ext = false;
        let result = loop {
            if let (Some(timed_out), true) = (portfolio_done, external_done) {
                let v = if timed_out {
                    CombinedVerdict::Timeout
                } else {
                    CombinedVerdict::Unknown
                };
                break Ok((v, Source::Portfolio, None));
            }
            let ev = match rx.recv_timeout(deadline.saturating_duration_since(Instant::now())) {
                Ok(ev) => ev,
                Err(_) => break Ok((CombinedVerdict::Timeout, Source::Portfolio, None)),
            };
            match ev {
                Event::Portfolio(Err(e)) => break Err(HarnessError::from(e)),
                Event::Portfolio(Ok(out)) => match &out.verdict {
                    Verdict::Sat(m) => break Ok((CombinedVerdict::Sat, Source::Portfolio, Some(m.clone()))),
                    Verdict::Unknown => {
                        if out.timed_out {
                            notes.push("portfolio reached the wall timeout".to_string());
                        }
                        portfolio_done = Some(out.timed_out);
                    }
                },
                Event::External(Err(e)) => {
                    notes.push(format!("external solver failed: {e}; using portfolio result only"));
                    crashed_ext = true;
                    external_done = true;
                }
                Event::External(Ok((status, text))) => {
                    external_done = true;
                    if crashed(&status, &text) {
                        notes.push(format!("external solver crashed ({status}); using portfolio result only"));
                        crashed_ext = true;
                        continue;
                    }
                    match parse_external_verdict(&text) {
                        ExternalVerdict::Sat => break Ok((CombinedVerdict::Sat, Source::External, None)),
                        ExternalVerdict::Unsat => break Ok((CombinedVerdict::Unsat, Source::External, None)),
                        ExternalVerdict::Unknown => notes.push("external solver answered unknown".to_string()),
                    }
                }
            }
        };
        stop.stop();
        group.kill();
        result.map(|r| (r, crashed_ext))
    });

    let ((verdict, source, model), external_crashed) = decided?;
    Ok(CombinedOutcome {
        verdict,
        source,
        wall_time: started.elapsed(),
        model,
        external_crashed,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_parsing() {
        assert_eq!(parse_external_verdict("sat\n(model ...)"), ExternalVerdict::Sat);
        assert_eq!(parse_external_verdict("unsat"), ExternalVerdict::Unsat);
        assert_eq!(parse_external_verdict("  unknown  \n"), ExternalVerdict::Unknown);
        assert_eq!(parse_external_verdict("(info)\n unsat\nsat"), ExternalVerdict::Unsat);
        assert_eq!(parse_external_verdict("segfault at 0x0"), ExternalVerdict::Unknown);
        assert_eq!(parse_external_verdict("saturated"), ExternalVerdict::Unknown);
    }
}
