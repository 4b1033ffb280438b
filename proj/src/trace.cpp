#include "minins/trace.hpp"

#include <charconv>
#include <cstdio>

#include "minins/errors.hpp"

namespace minins {

namespace {

template <typename T>
void append_number(std::string& out, T value) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, end);
}

void append_address(std::string& out, Address a) {
  append_number(out, a.node);
  out.push_back('.');
  append_number(out, a.port);
}

}  // namespace

TraceRecord make_record(TraceOp op, SimTime time, NodeId from, NodeId to, const Packet& pkt) {
  TraceRecord rec;
  rec.op = op;
  rec.time = time;
  rec.from = from;
  rec.to = to;
  rec.ptype = pkt.ptype;
  rec.size = pkt.size;
  rec.fid = pkt.fid;
  rec.src = pkt.src;
  rec.dst = pkt.dst;
  rec.seq = pkt.seq;
  rec.uid = pkt.uid;
  return rec;
}

std::string format_line(const TraceRecord& rec) {
  std::string out;
  out.reserve(80);
  out.push_back(static_cast<char>(rec.op));
  out.push_back(' ');
  out += format_seconds_fixed(rec.time);
  out.push_back(' ');
  append_number(out, rec.from);
  out.push_back(' ');
  append_number(out, rec.to);
  out.push_back(' ');
  out += rec.ptype;
  out.push_back(' ');
  append_number(out, rec.size);
  out.push_back(' ');
  out += rec.flags;
  out.push_back(' ');
  append_number(out, rec.fid);
  out.push_back(' ');
  append_address(out, rec.src);
  out.push_back(' ');
  append_address(out, rec.dst);
  out.push_back(' ');
  append_number(out, rec.seq);
  out.push_back(' ');
  append_number(out, rec.uid);
  out.push_back('\n');
  return out;
}

std::string TraceDigest::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
  return buf;
}

std::unique_ptr<TraceWriter> TraceWriter::open_file(const std::string& path) {
  auto file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*file) throw IoError("cannot open trace file '" + path + "' for writing");
  auto writer = std::make_unique<TraceWriter>();
  writer->out_ = file.get();
  writer->file_ = std::move(file);
  writer->path_ = path;
  return writer;
}

void TraceWriter::on_packet_event(TraceOp op, SimTime time, NodeId from, NodeId to, const Packet& pkt) {
  record(make_record(op, time, from, to, pkt));
}

void TraceWriter::record(const TraceRecord& rec) {
  if (closed_) throw IoError("trace written after close");
  std::string line = format_line(rec);
  digest_.update(line);
  ++lines_;
  if (out_) {
    out_->write(line.data(), static_cast<std::streamsize>(line.size()));
    if (!*out_) throw IoError("failed writing trace" + (path_.empty() ? std::string() : " '" + path_ + "'"));
  }
}

void TraceWriter::close_flush() {
  if (closed_) return;
  closed_ = true;
  if (out_) {
    out_->flush();
    if (!*out_) throw IoError("failed flushing trace");
  }
  if (file_) {
    file_->close();
    if (file_->fail()) throw IoError("failed closing trace file '" + path_ + "'");
  }
}

}  // namespace minins
