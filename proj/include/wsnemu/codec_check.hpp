// SPDX-License-Identifier: Apache-2.0

#ifndef WSNEMU_CODEC_CHECK_HPP
#define WSNEMU_CODEC_CHECK_HPP

#include <string>
#include <vector>

namespace wsnemu {

struct CodecCheckResult {
    size_t checksRun = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

/// Runs the built-in codec vector suites: FCS check values and residue,
/// SLIP byte-stuffing vectors, the PCAP global-header golden bytes, and
/// frame-control bit-layout vectors.
CodecCheckResult runCodecCheck();

} // namespace wsnemu

#endif
