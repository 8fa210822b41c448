//! Newline-delimited subprocess protocol shared by external scorers and generators.
//!
//! The command runs under `sh -c`. Every input record is written as one line on its
//! standard input; it must answer with exactly one line per record on standard output
//! and exit with status 0.

use std::io::{BufRead, BufReader, Write};
use std::process::{Command, Stdio};
use std::thread;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExternalError {
    #[error("failed to run `{command}`: {source}")]
    SpawnFailure {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("`{command}` protocol error at output line {line}: {message}")]
    ProtocolError { command: String, line: usize, message: String },
}

/// Sends `lines` to `command` and returns its output lines (without terminators).
pub fn run_line_protocol(command: &str, lines: &[String]) -> Result<Vec<String>, ExternalError> {
    let spawn_err = |source| ExternalError::SpawnFailure { command: command.to_string(), source };
    let protocol_err = |line, message: String| ExternalError::ProtocolError {
        command: command.to_string(),
        line,
        message,
    };
    if let Some(pos) = lines.iter().position(|l| l.contains('\n')) {
        return Err(protocol_err(pos + 1, "input record contains a newline".into()));
    }

    let mut child = Command::new("sh")
        .arg("-c")
        .arg(command)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::inherit())
        .spawn()
        .map_err(spawn_err)?;

    let mut stdin = child.stdin.take().expect("stdin is piped");
    let payload: String = lines.iter().flat_map(|l| [l.as_str(), "\n"]).collect();
    // Feed stdin from a separate thread so a chatty child cannot deadlock us.
    let writer = thread::spawn(move || {
        // A child that exits early closes the pipe; the line count check reports that.
        let _ = stdin.write_all(payload.as_bytes());
    });

    let stdout = child.stdout.take().expect("stdout is piped");
    let mut output = Vec::with_capacity(lines.len());
    for (i, line) in BufReader::new(stdout).lines().enumerate() {
        let line = line.map_err(|e| protocol_err(i + 1, format!("unreadable output: {e}")))?;
        output.push(line.strip_suffix('\r').map(str::to_string).unwrap_or(line));
    }
    let _ = writer.join();
    let status = child.wait().map_err(spawn_err)?;
    if !status.success() {
        return Err(protocol_err(output.len(), format!("exited with {status}")));
    }
    if output.len() != lines.len() {
        return Err(protocol_err(
            output.len().min(lines.len()) + 1,
            format!("expected {} output lines, got {}", lines.len(), output.len()),
        ));
    }
    Ok(output)
}
