#pragma once

namespace dkg::cli {

/// Entry point shared by the `dkg` binary and the CLI round-trip tests.
int cli_main(int argc, const char* const* argv);

} // namespace dkg::cli
