#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nego/domain.hpp"

namespace nego {

struct ProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SpeechAct { Propose, Accept, Reject };

enum class PlayerId { P1, P2 };  // P1 (buyer) always plays first

inline PlayerId opponentOf(PlayerId p) {
  return p == PlayerId::P1 ? PlayerId::P2 : PlayerId::P1;
}

/// A speech-act message. Propose carries exactly one bid; Accept and Reject
/// carry none.
struct Message {
  SpeechAct act = SpeechAct::Propose;
  std::optional<Bid> content;

  static Message propose(Bid bid) { return {SpeechAct::Propose, std::move(bid)}; }
  static Message accept() { return {SpeechAct::Accept, std::nullopt}; }
  static Message reject() { return {SpeechAct::Reject, std::nullopt}; }
};

enum class SessionStatus { Open, Agreed, Failed };

/// Ordered message sequence of one negotiation. The sender of message i is
/// determined by parity (P1 sent message 0). Appending enforces the protocol
/// invariants: Propose carries a bid, Accept/Reject close the history, and a
/// closed history takes no further messages.
class History {
 public:
  void append(Message m);

  const std::vector<Message>& messages() const { return messages_; }
  SessionStatus status() const { return status_; }
  std::size_t size() const { return messages_.size(); }

  static PlayerId senderOf(std::size_t index) {
    return index % 2 == 0 ? PlayerId::P1 : PlayerId::P2;
  }

  int proposeCount() const { return proposeCount_; }
  /// Proposals sent by the given player, in order.
  std::vector<Bid> proposalsBy(PlayerId p) const;
  /// The opponent's latest proposal, if any, from `self`'s point of view.
  std::optional<Bid> lastProposalBy(PlayerId p) const;

 private:
  std::vector<Message> messages_;
  SessionStatus status_ = SessionStatus::Open;
  int proposeCount_ = 0;
};

/// Player to move: P1 on even history sizes, P2 on odd ones.
PlayerId playerToMove(const History& h);

/// A negotiating agent. Agents see the public history plus their own profile;
/// they never see the opponent's.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual Message act(const History& h) = 0;
  virtual std::string_view name() const = 0;
};

enum class TerminalKind { Accept, Reject, RoundCap };

struct SessionResult {
  std::optional<Bid> outcome;
  double utility1 = 0.0;
  double utility2 = 0.0;
  int rounds = 0;  // number of Propose messages
  TerminalKind terminal = TerminalKind::RoundCap;
};

struct SessionError : std::runtime_error {
  PlayerId offender;
  SessionError(PlayerId p, const std::string& what)
      : std::runtime_error(what), offender(p) {}
};

/// Runs one alternating-offers session to termination. agentA plays P1 (moves
/// first) and is scored with profileA. The round cap fires when `roundCap`
/// proposals are on the table and the responder does not accept; reserve
/// utilities are then assigned. If `transcript` is given, one line per message
/// is written: `turn,player,act,bid-json` (issue keys sorted).
SessionResult runSession(Agent& agentA, Agent& agentB, const DomainSpec& domain,
                         const PreferenceProfile& profileA,
                         const PreferenceProfile& profileB, int roundCap,
                         std::ostream* transcript = nullptr);

std::string_view actName(SpeechAct a);
std::string_view terminalName(TerminalKind t);

}  // namespace nego
