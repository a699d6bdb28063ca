#ifndef AGGSIM_NETSIM_HPP
#define AGGSIM_NETSIM_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "aggsim/bigint.hpp"

namespace aggsim {

enum class MsgType : std::uint8_t {
  setup_share = 0x01,
  product_ciphertext = 0x02,
  sum_ciphertext = 0x03,
  result_announce = 0x04,
  secure_segment = 0x05,  // the only type invisible to the eavesdropper
};

constexpr std::uint32_t kBroadcast = 0;
constexpr std::size_t kWireHeaderBytes = 21;

/// One message on the simulated channel. Payload carries a single
/// arbitrary-precision integer as big-endian magnitude bytes with no leading
/// zero byte (zero encodes to an empty payload).
struct WireMessage {
  MsgType type = MsgType::setup_share;
  std::uint32_t session_id = 0;
  std::uint32_t term_index = 0;  // 0 when not applicable
  std::uint32_t sender = 0;
  std::uint32_t recipient = kBroadcast;  // 0 = broadcast
  BigInt payload;

  bool secure() const { return type == MsgType::secure_segment; }
  std::size_t encoded_size() const;

  bool operator==(const WireMessage&) const = default;
};

// Round-trips byte-exactly: decode_message(encode_message(m)) == m.
std::vector<std::uint8_t> encode_message(const WireMessage& m);
WireMessage decode_message(std::span<const std::uint8_t> bytes);

struct TranscriptEntry {
  std::uint64_t timestamp = 0;  // logical delivery time
  WireMessage message;
};

struct PartyCounters {
  std::uint64_t msgs_sent = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t msgs_received = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t mul_mod = 0;  // modular multiplications performed
  std::uint64_t exp_mod = 0;  // modular exponentiations performed
};

/// The eavesdropper's view plus bookkeeping: an append-only ordered record of
/// every insecure message, and per-party operation/message counters backing
/// the complexity reports. Secure messages update counters but never appear
/// in the entry list.
class Transcript {
 public:
  const std::vector<TranscriptEntry>& entries() const { return entries_; }

  // global tallies of insecure traffic (wire_*) and secure traffic
  std::uint64_t wire_messages() const { return wire_messages_; }
  std::uint64_t wire_bytes() const { return wire_bytes_; }
  std::uint64_t secure_messages() const { return secure_messages_; }
  std::uint64_t secure_bytes() const { return secure_bytes_; }
  // fan-out view: broadcasts count once per actual delivery
  std::uint64_t delivered_messages() const { return delivered_messages_; }
  std::uint64_t delivered_bytes() const { return delivered_bytes_; }

  PartyCounters& party(std::uint32_t id) { return parties_[id]; }
  const std::map<std::uint32_t, PartyCounters>& parties() const { return parties_; }

  void count_mul(std::uint32_t party_id, std::uint64_t n = 1) { parties_[party_id].mul_mod += n; }
  void count_exp(std::uint32_t party_id, std::uint64_t n = 1) { parties_[party_id].exp_mod += n; }

  /// One line per recorded message:
  /// `ts=<int> type=<hex> sess=<int> term=<int> from=<int> to=<int> payload=<hex>`
  std::string dump() const;

  // Channel-side recording hooks.
  void record_send(const WireMessage& m);
  void record_delivery(const WireMessage& m, std::uint32_t receiver);

 private:
  std::vector<TranscriptEntry> entries_;
  std::map<std::uint32_t, PartyCounters> parties_;
  std::uint64_t next_timestamp_ = 0;
  std::uint64_t wire_messages_ = 0, wire_bytes_ = 0;
  std::uint64_t secure_messages_ = 0, secure_bytes_ = 0;
  std::uint64_t delivered_messages_ = 0, delivered_bytes_ = 0;
};

/// Every recorded message whose payload equals one of the forbidden integers
/// (raw secrets, unblinded term values).
std::vector<TranscriptEntry> transcript_scan(const Transcript& t,
                                             const std::vector<BigInt>& forbidden);

/// Deterministic simulated network for parties 1..num_parties. Sends within a
/// round are buffered and delivered in ascending sender order (stable within
/// one sender), so transcripts are byte-identical across runs regardless of
/// which thread posted first. Every insecure message is also handed to the
/// recording eavesdropper.
class Channel {
 public:
  explicit Channel(std::uint32_t num_parties);

  std::uint32_t num_parties() const { return num_parties_; }

  /// Queues a message into the current round. Throws UnknownRecipient when
  /// the recipient is neither kBroadcast nor a registered party.
  void post(const WireMessage& m);

  /// Delivers the queued round: recipient inboxes are filled, the
  /// eavesdropper transcript and all counters are updated.
  void flush_round();

  /// Removes and returns everything delivered to `party` so far.
  std::vector<WireMessage> drain_inbox(std::uint32_t party);

  Transcript& transcript() { return transcript_; }
  const Transcript& transcript() const { return transcript_; }

 private:
  std::uint32_t num_parties_;
  std::mutex mutex_;
  std::vector<std::pair<std::uint64_t, WireMessage>> pending_;  // (post order, msg)
  std::uint64_t post_seq_ = 0;
  std::map<std::uint32_t, std::vector<WireMessage>> inboxes_;
  Transcript transcript_;
};

struct RoleReport {
  std::string role;
  std::uint64_t parties = 0;
  std::uint64_t msgs_sent = 0, bytes_sent = 0;
  std::uint64_t msgs_received = 0, bytes_received = 0;
  std::uint64_t mul_mod = 0, exp_mod = 0;
};

struct ComplexityReport {
  std::vector<RoleReport> rows;
  std::string to_string() const;
};

/// Per-role totals (aggregator vs participants) for a completed run;
/// aggregator_id = 0 means no aggregator row.
ComplexityReport complexity_report(const Transcript& t, std::uint32_t aggregator_id = 0);

}  // namespace aggsim

#endif
