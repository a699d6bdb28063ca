#include "aggsim/netsim.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "aggsim/errors.hpp"

namespace aggsim {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
         (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

}  // namespace

std::size_t WireMessage::encoded_size() const {
  return kWireHeaderBytes + to_bytes(payload).size();
}

std::vector<std::uint8_t> encode_message(const WireMessage& m) {
  const auto payload = to_bytes(m.payload);
  if (payload.size() > 0xffffffffull)
    throw InvalidParams("encode_message: payload exceeds the 4-byte length field");
  std::vector<std::uint8_t> out;
  out.reserve(kWireHeaderBytes + payload.size());
  out.push_back(static_cast<std::uint8_t>(m.type));
  put_u32(out, m.session_id);
  put_u32(out, m.term_index);
  put_u32(out, m.sender);
  put_u32(out, m.recipient);
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

WireMessage decode_message(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kWireHeaderBytes) throw ParseError("wire message truncated header");
  WireMessage m;
  const std::uint8_t tag = bytes[0];
  if (tag < 0x01 || tag > 0x05) throw ParseError("wire message unknown type tag");
  m.type = static_cast<MsgType>(tag);
  m.session_id = get_u32(bytes, 1);
  m.term_index = get_u32(bytes, 5);
  m.sender = get_u32(bytes, 9);
  m.recipient = get_u32(bytes, 13);
  const std::uint32_t len = get_u32(bytes, 17);
  if (bytes.size() != kWireHeaderBytes + len) throw ParseError("wire message length mismatch");
  const auto payload = bytes.subspan(kWireHeaderBytes, len);
  if (len > 0 && payload[0] == 0) throw ParseError("wire message payload has leading zero");
  m.payload = from_bytes(payload);
  return m;
}

void Transcript::record_send(const WireMessage& m) {
  const std::size_t size = m.encoded_size();
  auto& pc = parties_[m.sender];
  pc.msgs_sent += 1;
  pc.bytes_sent += size;
  if (m.secure()) {
    secure_messages_ += 1;
    secure_bytes_ += size;
    return;
  }
  wire_messages_ += 1;
  wire_bytes_ += size;
  entries_.push_back({next_timestamp_++, m});
}

void Transcript::record_delivery(const WireMessage& m, std::uint32_t receiver) {
  const std::size_t size = m.encoded_size();
  auto& pc = parties_[receiver];
  pc.msgs_received += 1;
  pc.bytes_received += size;
  delivered_messages_ += 1;
  delivered_bytes_ += size;
}

std::string Transcript::dump() const {
  std::ostringstream os;
  for (const auto& e : entries_) {
    char type_buf[8];
    std::snprintf(type_buf, sizeof type_buf, "0x%02x",
                  static_cast<unsigned>(e.message.type));
    os << "ts=" << e.timestamp << " type=" << type_buf
       << " sess=" << e.message.session_id << " term=" << e.message.term_index
       << " from=" << e.message.sender << " to=" << e.message.recipient << " payload=";
    if (e.message.payload != 0) os << to_hex(e.message.payload);
    os << '\n';
  }
  return os.str();
}

std::vector<TranscriptEntry> transcript_scan(const Transcript& t,
                                             const std::vector<BigInt>& forbidden) {
  const std::set<BigInt> bad(forbidden.begin(), forbidden.end());
  std::vector<TranscriptEntry> hits;
  for (const auto& e : t.entries()) {
    if (bad.count(e.message.payload)) hits.push_back(e);
  }
  return hits;
}

Channel::Channel(std::uint32_t num_parties) : num_parties_(num_parties) {
  if (num_parties == 0) throw InvalidParams("Channel: need at least one party");
}

void Channel::post(const WireMessage& m) {
  std::lock_guard lock(mutex_);
  if (m.sender == 0 || m.sender > num_parties_)
    throw UnknownRecipient("post: sender " + std::to_string(m.sender) + " not registered");
  if (m.recipient != kBroadcast && (m.recipient == 0 || m.recipient > num_parties_))
    throw UnknownRecipient("post: recipient " + std::to_string(m.recipient) +
                           " not registered");
  pending_.emplace_back(post_seq_++, m);
}

void Channel::flush_round() {
  std::lock_guard lock(mutex_);
  // deterministic delivery order: ascending sender, then original post order
  std::sort(pending_.begin(), pending_.end(),
            [](const auto& a, const auto& b) {
              if (a.second.sender != b.second.sender)
                return a.second.sender < b.second.sender;
              return a.first < b.first;
            });
  for (const auto& [seq, msg] : pending_) {
    transcript_.record_send(msg);
    if (msg.recipient == kBroadcast) {
      for (std::uint32_t party = 1; party <= num_parties_; ++party) {
        if (party == msg.sender) continue;
        inboxes_[party].push_back(msg);
        transcript_.record_delivery(msg, party);
      }
    } else {
      inboxes_[msg.recipient].push_back(msg);
      transcript_.record_delivery(msg, msg.recipient);
    }
  }
  pending_.clear();
}

std::vector<WireMessage> Channel::drain_inbox(std::uint32_t party) {
  std::lock_guard lock(mutex_);
  auto it = inboxes_.find(party);
  if (it == inboxes_.end()) return {};
  std::vector<WireMessage> out = std::move(it->second);
  it->second.clear();
  return out;
}

ComplexityReport complexity_report(const Transcript& t, std::uint32_t aggregator_id) {
  ComplexityReport report;
  RoleReport participants{"participant", 0, 0, 0, 0, 0, 0, 0};
  for (const auto& [id, pc] : t.parties()) {
    if (aggregator_id != 0 && id == aggregator_id) {
      report.rows.push_back({"aggregator", 1, pc.msgs_sent, pc.bytes_sent,
                             pc.msgs_received, pc.bytes_received, pc.mul_mod, pc.exp_mod});
    } else {
      participants.parties += 1;
      participants.msgs_sent += pc.msgs_sent;
      participants.bytes_sent += pc.bytes_sent;
      participants.msgs_received += pc.msgs_received;
      participants.bytes_received += pc.bytes_received;
      participants.mul_mod += pc.mul_mod;
      participants.exp_mod += pc.exp_mod;
    }
  }
  report.rows.push_back(participants);
  return report;
}

std::string ComplexityReport::to_string() const {
  std::ostringstream os;
  os << "role          parties msgs_sent bytes_sent msgs_recv bytes_recv mul_mod exp_mod\n";
  for (const auto& r : rows) {
    os << r.role;
    for (std::size_t pad = r.role.size(); pad < 14; ++pad) os << ' ';
    os << r.parties << ' ' << r.msgs_sent << ' ' << r.bytes_sent << ' '
       << r.msgs_received << ' ' << r.bytes_received << ' ' << r.mul_mod << ' '
       << r.exp_mod << '\n';
  }
  return os.str();
}

}  // namespace aggsim
