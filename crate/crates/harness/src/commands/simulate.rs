use boussinesq_core::spectral::write_field_csv;

use super::{initial_state, run_to_times, system_tag, time_tag, write_file, Context};
use crate::error::HarnessError;

/// Writes `{mb|gb}_t{time}.csv` for every output time.
pub fn cmd_simulate(ctx: &Context) -> Result<(), HarnessError> {
    let cfg = ctx.load_config()?;
    let dir = ctx.out_dir(Some(&cfg.out_dir));
    let init = initial_state(cfg.grid, cfg.system, &cfg.initial)?;
    let snaps = run_to_times(ctx, init, &cfg.times, cfg.dt, cfg.dealias)?;
    for s in &snaps {
        let name = format!("{}_t{}.csv", system_tag(s.system()), time_tag(s.t()));
        let path = write_file(&dir, &name, &write_field_csv(s))?;
        ctx.note(format!("wrote {}", path.display()));
    }
    Ok(())
}
