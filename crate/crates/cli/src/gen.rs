use crate::args::GenKind;
use crate::error::CliResult;
use dsg_core::graph::io::{write_directed, write_graph, write_weighted};
use dsg_core::graph::{gnp, planted_dense, planted_directed, uniform_costs, NodeWeightedGraph};
use std::io::Write;
use std::path::PathBuf;

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Edge-list text for `kind`, with comment lines describing the instance.
pub fn generate(kind: &GenKind) -> CliResult<(String, Option<PathBuf>)> {
    Ok(match kind {
        GenKind::Planted {
            n,
            k,
            pin,
            pout,
            seed,
            out,
        } => {
            let p = planted_dense(*n, *k, *pin, *pout, *seed)?;
            let d = p.graph.density(&p.block)?;
            let text = format!(
                "# planted n={n} k={k} pin={pin} pout={pout} seed={seed}\n\
                 # block density {} = {}\n# block {}\n{}",
                d,
                d.value(),
                join(&p.block),
                write_graph(&p.graph, None, None)
            );
            (text, out.clone())
        }
        GenKind::Gnp { n, p, seed, out } => {
            let g = gnp(*n, *p, *seed)?;
            let text = format!(
                "# gnp n={n} p={p} seed={seed}\n{}",
                write_graph(&g, None, None)
            );
            (text, out.clone())
        }
        GenKind::Weighted {
            n,
            p,
            lo,
            hi,
            seed,
            out,
        } => {
            let g = gnp(*n, *p, *seed)?;
            let costs = uniform_costs(*n, *lo, *hi, seed.wrapping_add(1))?;
            let w = NodeWeightedGraph::new(g, costs)?;
            let text = format!(
                "# weighted gnp n={n} p={p} costs=[{lo},{hi}] seed={seed}\n{}",
                write_weighted(&w, None)
            );
            (text, out.clone())
        }
        GenKind::Directed {
            n,
            s,
            t,
            pin,
            pout,
            seed,
            out,
        } => {
            let p = planted_directed(*n, *s, *t, *pin, *pout, *seed)?;
            let d = p.graph.directed_density(&p.sources, &p.targets)?;
            let text = format!(
                "# directed n={n} s={s} t={t} pin={pin} pout={pout} seed={seed}\n\
                 # block density {}\n# sources {}\n# targets {}\n{}",
                d.value(),
                join(&p.sources),
                join(&p.targets),
                write_directed(&p.graph, None)
            );
            (text, out.clone())
        }
    })
}

pub fn run(kind: &GenKind) -> CliResult<()> {
    let (text, out) = generate(kind)?;
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}
