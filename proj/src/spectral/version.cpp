#include "cmhd/version.hpp"

#include <fftw3.h>

namespace cmhd {

std::string version() { return CMHD_VERSION; }

nlohmann::json version_stamp() {
  return {{"tool", "cmhd"},
          {"version", version()},
          {"build_type", CMHD_BUILD_TYPE},
          {"compiler", __VERSION__},
          {"fftw", std::string(fftw_version)}};
}

}  // namespace cmhd
