#pragma once

namespace caqc {

/// Entry point of the caqc-lab command line tool. Returns the process exit
/// code: 0 on success, 1 on domain errors, 2 on usage errors.
int cli_main(int argc, char** argv);

}  // namespace caqc
