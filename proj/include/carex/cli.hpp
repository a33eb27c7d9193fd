#pragma once

namespace carex {

/// Entry point for the carex command line tool. Subcommands:
///
///   solve    --problem <path> | --example <1|2|3> [--n N]
///            --method <newton-gadi|newton-adi|inexact-newton-gadi|
///                      inexact-newton-adi|newton-exact>
///            [--omega W] [--alpha auto|VALUE] [--eps-out E] [--eps-inn E]
///            [--lmax L] [--kmax K] [--eta k3|k4|const:V] [--symmetrize]
///            [--report PATH] [--history PATH]
///   bench    --spec <path> --out <dir>
///   analyze  --problem <path> | --example <1|2|3> [--n N]
///            --alpha A --omega W          (n ≤ 16)
///
/// Exit codes: 0 converged (analyze and bench return 0 on success),
/// 2 iteration cap or divergence, 1 usage or IO errors.
int run_cli(int argc, char** argv);

} // namespace carex
