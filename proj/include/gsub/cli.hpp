#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsub {

// Entry point behind the gsub binary. args excludes the program name.
// Exit status: 0 success, 1 data error (Error codes printed to err),
// 2 usage error. Subcommands: validate, convert, stats, forge, schedule,
// eval, perturb, rerun. Writing subcommands stage outputs under a ".partial"
// suffix, rename on success, and emit a run manifest beside them. GSUB_SEED
// overrides --seed everywhere except under rerun, which replays the
// manifest's recorded command verbatim.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace gsub
