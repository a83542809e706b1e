// SPDX-License-Identifier: Apache-2.0

#include "wsnemu/pcap.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace wsnemu::pcap {

const char* errorToString(PcapError e)
{
    switch (e) {
    case PcapError::BadMagic: return "BadMagic";
    case PcapError::WrongLinktype: return "WrongLinktype";
    case PcapError::Truncated: return "Truncated";
    case PcapError::BadRecord: return "BadRecord";
    case PcapError::Oversize: return "Oversize";
    }
    return "?";
}

Bytes encodeGlobalHeader(const GlobalHeader& h)
{
    Bytes out;
    out.reserve(kGlobalHeaderSize);
    ByteWriter w(out);
    w.u32le(h.magic);
    w.u16le(h.versionMajor);
    w.u16le(h.versionMinor);
    w.u32le(static_cast<uint32_t>(h.thiszone));
    w.u32le(h.sigfigs);
    w.u32le(h.snaplen);
    w.u32le(h.linktype);
    return out;
}

Result<GlobalHeader, PcapError> decodeGlobalHeader(ByteView bytes)
{
    if (bytes.size() < kGlobalHeaderSize)
        return PcapError::Truncated;
    ByteReader r(bytes);
    GlobalHeader h;
    h.magic = r.u32le();
    if (h.magic != kMagicMicros)
        return PcapError::BadMagic;
    h.versionMajor = r.u16le();
    h.versionMinor = r.u16le();
    h.thiszone = static_cast<int32_t>(r.u32le());
    h.sigfigs = r.u32le();
    h.snaplen = r.u32le();
    h.linktype = r.u32le();
    if (h.linktype != kLinktypeIeee802154WithFcs)
        return PcapError::WrongLinktype;
    return h;
}

Result<Bytes, PcapError> encodeRecord(SimTimeUs t, ByteView data, uint32_t snaplen)
{
    if (data.size() > snaplen)
        return PcapError::Oversize;
    Bytes out;
    out.reserve(kRecordHeaderSize + data.size());
    ByteWriter w(out);
    w.u32le(static_cast<uint32_t>(t / 1'000'000));
    w.u32le(static_cast<uint32_t>(t % 1'000'000));
    w.u32le(static_cast<uint32_t>(data.size()));
    w.u32le(static_cast<uint32_t>(data.size()));
    w.raw(data);
    return out;
}

Record makeRecord(SimTimeUs t, ByteView data)
{
    Record rec;
    rec.tsSec = static_cast<uint32_t>(t / 1'000'000);
    rec.tsUsec = static_cast<uint32_t>(t % 1'000'000);
    rec.originalLen = static_cast<uint32_t>(data.size());
    rec.data.assign(data.begin(), data.end());
    return rec;
}

void StreamDecoder::fail(PcapError e)
{
    failed_ = true;
    error_ = e;
    pending_.clear();
}

FeedResult StreamDecoder::feed(ByteView chunk)
{
    FeedResult result;
    if (failed_)
        return result;

    pending_.insert(pending_.end(), chunk.begin(), chunk.end());

    for (;;) {
        switch (phase_) {
        case Phase::AwaitHeader: {
            if (pending_.size() < kGlobalHeaderSize)
                return result;
            auto header = decodeGlobalHeader(ByteView(pending_).first(kGlobalHeaderSize));
            if (!header) {
                fail(header.error());
                return result;
            }
            header_ = *header;
            headerSeen_ = true;
            result.sawHeader = true;
            pending_.erase(pending_.begin(), pending_.begin() + kGlobalHeaderSize);
            phase_ = Phase::AwaitRecordHeader;
            break;
        }
        case Phase::AwaitRecordHeader: {
            if (pending_.size() < kRecordHeaderSize)
                return result;
            ByteReader r(pending_);
            current_.tsSec = r.u32le();
            current_.tsUsec = r.u32le();
            currentCapLen_ = r.u32le();
            current_.originalLen = r.u32le();
            if (currentCapLen_ > header_.snaplen || currentCapLen_ > current_.originalLen) {
                fail(PcapError::BadRecord);
                return result;
            }
            pending_.erase(pending_.begin(), pending_.begin() + kRecordHeaderSize);
            phase_ = Phase::AwaitRecordData;
            break;
        }
        case Phase::AwaitRecordData: {
            if (pending_.size() < currentCapLen_)
                return result;
            current_.data.assign(pending_.begin(), pending_.begin() + currentCapLen_);
            pending_.erase(pending_.begin(), pending_.begin() + currentCapLen_);
            result.records.push_back(std::move(current_));
            current_ = {};
            phase_ = Phase::AwaitRecordHeader;
            break;
        }
        }
    }
}

Result<bool, PcapError> StreamDecoder::finish() const
{
    if (failed_)
        return error_;
    if (!headerSeen_ || !pending_.empty() || phase_ == Phase::AwaitRecordData)
        return PcapError::Truncated;
    return true;
}

FileWriter::~FileWriter()
{
    if (file_)
        std::fclose(file_);
}

void FileWriter::open(const std::string& path, uint32_t linktype, uint32_t snaplen)
{
    close();
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_)
        throw std::runtime_error("pcap: cannot open '" + path + "' for writing: " +
                                 std::strerror(errno));
    path_ = path;
    snaplen_ = snaplen;
    recordCount_ = 0;
    GlobalHeader h;
    h.linktype = linktype;
    h.snaplen = snaplen;
    Bytes bytes = encodeGlobalHeader(h);
    if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size())
        throw std::runtime_error("pcap: short write to '" + path_ + "'");
}

void FileWriter::append(SimTimeUs t, ByteView data)
{
    if (!file_)
        throw std::runtime_error("pcap: append to closed writer");
    auto rec = encodeRecord(t, data, snaplen_);
    if (!rec)
        throw std::runtime_error("pcap: record exceeds snaplen in '" + path_ + "'");
    if (std::fwrite(rec->data(), 1, rec->size(), file_) != rec->size())
        throw std::runtime_error("pcap: short write to '" + path_ + "'");
    ++recordCount_;
}

void FileWriter::flush()
{
    if (file_ && std::fflush(file_) != 0)
        throw std::runtime_error("pcap: flush failed for '" + path_ + "'");
}

void FileWriter::close()
{
    if (file_) {
        std::fclose(file_);
        file_ = nullptr;
    }
}

Result<FileContents, PcapError> readFile(const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f)
        throw std::runtime_error("pcap: cannot open '" + path + "' for reading: " +
                                 std::strerror(errno));
    StreamDecoder decoder;
    FileContents contents;
    uint8_t buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) {
        auto fed = decoder.feed(ByteView(buf, n));
        for (auto& rec : fed.records)
            contents.records.push_back(std::move(rec));
        if (decoder.failed())
            break;
    }
    std::fclose(f);
    auto end = decoder.finish();
    if (!end)
        return end.error();
    contents.header = decoder.header();
    return contents;
}

} // namespace wsnemu::pcap
