// SPDX-License-Identifier: Apache-2.0
//
// PCAP file and stream codec. One canonical wire form everywhere:
// little-endian, microsecond magic, linktype 195 (IEEE 802.15.4 with FCS).

#ifndef WSNEMU_PCAP_HPP
#define WSNEMU_PCAP_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wsnemu/bytes.hpp"
#include "wsnemu/result.hpp"

namespace wsnemu::pcap {

constexpr uint32_t kMagicMicros = 0xA1B2C3D4;
constexpr uint32_t kMagicSwapped = 0xD4C3B2A1;
constexpr uint16_t kVersionMajor = 2;
constexpr uint16_t kVersionMinor = 4;
constexpr uint32_t kDefaultSnaplen = 65535;
constexpr uint32_t kLinktypeIeee802154WithFcs = 195;
constexpr size_t kGlobalHeaderSize = 24;
constexpr size_t kRecordHeaderSize = 16;

struct GlobalHeader {
    uint32_t magic = kMagicMicros;
    uint16_t versionMajor = kVersionMajor;
    uint16_t versionMinor = kVersionMinor;
    int32_t thiszone = 0;
    uint32_t sigfigs = 0;
    uint32_t snaplen = kDefaultSnaplen;
    uint32_t linktype = kLinktypeIeee802154WithFcs;

    bool operator==(const GlobalHeader&) const = default;
};

struct Record {
    uint32_t tsSec = 0;
    uint32_t tsUsec = 0;
    uint32_t originalLen = 0;
    Bytes data; // capturedLen == data.size()

    SimTimeUs timeUs() const { return SimTimeUs(tsSec) * 1'000'000 + tsUsec; }

    bool operator==(const Record&) const = default;
};

enum class PcapError : uint8_t {
    BadMagic,
    WrongLinktype,
    Truncated,
    BadRecord, // record header violates the captured-length invariants
    Oversize,  // data longer than the stream snaplen
};

const char* errorToString(PcapError e);

Bytes encodeGlobalHeader(const GlobalHeader& h);
Result<GlobalHeader, PcapError> decodeGlobalHeader(ByteView bytes);

/// 16-byte record header + data. Timestamps split from simulation epoch 0.
Result<Bytes, PcapError> encodeRecord(SimTimeUs t, ByteView data,
                                      uint32_t snaplen = kDefaultSnaplen);

Record makeRecord(SimTimeUs t, ByteView data);

struct FeedResult {
    std::vector<Record> records;
    bool sawHeader = false;
};

/// Incremental stream decoder. The stream must begin with a global header;
/// records are emitted as they complete. Errors are terminal: once failed,
/// further input is ignored.
class StreamDecoder {
public:
    FeedResult feed(ByteView chunk);

    bool failed() const { return failed_; }
    PcapError error() const { return error_; }
    bool headerSeen() const { return headerSeen_; }
    const GlobalHeader& header() const { return header_; }

    /// End-of-stream check: mid-record leftovers classify as Truncated.
    Result<bool, PcapError> finish() const;

private:
    enum class Phase { AwaitHeader, AwaitRecordHeader, AwaitRecordData };

    void fail(PcapError e);

    Phase phase_ = Phase::AwaitHeader;
    Bytes pending_;
    GlobalHeader header_;
    bool headerSeen_ = false;
    Record current_;
    uint32_t currentCapLen_ = 0;
    bool failed_ = false;
    PcapError error_ = PcapError::Truncated;
};

/// Append-only capture file: global header at open, records in call order.
/// I/O failures throw std::runtime_error with the path in the message.
class FileWriter {
public:
    FileWriter() = default;
    ~FileWriter();
    FileWriter(const FileWriter&) = delete;
    FileWriter& operator=(const FileWriter&) = delete;

    void open(const std::string& path, uint32_t linktype = kLinktypeIeee802154WithFcs,
              uint32_t snaplen = kDefaultSnaplen);
    void append(SimTimeUs t, ByteView data);
    void flush();
    void close();
    bool isOpen() const { return file_ != nullptr; }
    size_t recordCount() const { return recordCount_; }

private:
    std::FILE* file_ = nullptr;
    std::string path_;
    uint32_t snaplen_ = kDefaultSnaplen;
    size_t recordCount_ = 0;
};

/// Reads a whole capture file; throws std::runtime_error on I/O failure,
/// returns a classified error for malformed content.
struct FileContents {
    GlobalHeader header;
    std::vector<Record> records;
};
Result<FileContents, PcapError> readFile(const std::string& path);

} // namespace wsnemu::pcap

#endif
