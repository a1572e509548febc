use clap::Parser;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use symbi_cli::{execute, parse_request};

#[derive(Parser)]
#[command(name = "symbi", version, about = "Extremal problems on the symmetrized bidisc")]
struct Args {
    /// Request JSON; read from stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Directory for output files; stdout is used when neither this nor
    /// the request's `output_path` is given.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Overrides the request seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn write_atomic(path: &Path, body: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, body)?;
    std::fs::rename(&tmp, path)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match &args.input {
        Some(p) => std::fs::read_to_string(p),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read request: {e}");
            return ExitCode::from(1);
        }
    };
    let mut req = match parse_request(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(s) = args.seed {
        req.seed = s;
    }
    let out = match execute(&req) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.exit_code() as u8);
        }
    };

    if req.output_path.is_none() && args.output.is_none() {
        print!("{}", out.primary.body);
        if !out.extra.is_empty() {
            eprintln!("note: extra {} output needs --output or output_path", out.extra[0].ext);
        }
    } else {
        let dir = args.output.clone().unwrap_or_else(|| PathBuf::from("."));
        let name = req.output_path.clone().unwrap_or_else(|| {
            format!("{}.{}", serde_json::to_value(req.command).unwrap().as_str().unwrap(), out.primary.ext)
        });
        let path = dir.join(name);
        let mut files = vec![(path.clone(), &out.primary.body)];
        files.extend(out.extra.iter().map(|a| (path.with_extension(a.ext), &a.body)));
        for (p, body) in files {
            if let Err(e) = write_atomic(&p, body) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::from(out.exit_code as u8)
}
