#include "nego/protocol.hpp"

namespace nego {

std::string_view actName(SpeechAct a) {
  switch (a) {
    case SpeechAct::Propose: return "propose";
    case SpeechAct::Accept: return "accept";
    case SpeechAct::Reject: return "reject";
  }
  return "?";
}

std::string_view terminalName(TerminalKind t) {
  switch (t) {
    case TerminalKind::Accept: return "accept";
    case TerminalKind::Reject: return "reject";
    case TerminalKind::RoundCap: return "roundcap";
  }
  return "?";
}

void History::append(Message m) {
  if (status_ != SessionStatus::Open)
    throw ProtocolError("cannot append to a terminal history");
  if (m.act == SpeechAct::Propose) {
    if (!m.content) throw ProtocolError("Propose must carry a bid");
    ++proposeCount_;
  } else {
    if (m.content) throw ProtocolError("Accept/Reject must not carry a bid");
    if (proposeCount_ == 0) throw ProtocolError("nothing on the table to respond to");
    status_ = m.act == SpeechAct::Accept ? SessionStatus::Agreed : SessionStatus::Failed;
  }
  messages_.push_back(std::move(m));
}

std::vector<Bid> History::proposalsBy(PlayerId p) const {
  std::vector<Bid> out;
  for (std::size_t i = 0; i < messages_.size(); ++i)
    if (senderOf(i) == p && messages_[i].act == SpeechAct::Propose)
      out.push_back(*messages_[i].content);
  return out;
}

std::optional<Bid> History::lastProposalBy(PlayerId p) const {
  for (std::size_t i = messages_.size(); i-- > 0;)
    if (senderOf(i) == p && messages_[i].act == SpeechAct::Propose)
      return *messages_[i].content;
  return std::nullopt;
}

PlayerId playerToMove(const History& h) {
  if (h.status() != SessionStatus::Open)
    throw ProtocolError("playerToMove called on a terminal history");
  return h.size() % 2 == 0 ? PlayerId::P1 : PlayerId::P2;
}

namespace {

void logMessage(std::ostream* transcript, const DomainSpec& domain,
                std::size_t index, const Message& m) {
  if (!transcript) return;
  *transcript << (index + 1) << ',' << (History::senderOf(index) == PlayerId::P1 ? 1 : 2)
              << ',' << actName(m.act) << ',';
  if (m.content) *transcript << domain.bidToJson(*m.content).dump();
  *transcript << '\n';
}

}  // namespace

SessionResult runSession(Agent& agentA, Agent& agentB, const DomainSpec& domain,
                         const PreferenceProfile& profileA,
                         const PreferenceProfile& profileB, int roundCap,
                         std::ostream* transcript) {
  if (roundCap < 1) throw ProtocolError("roundCap must be >= 1");

  History history;
  SessionResult result;
  bool capped = false;

  while (history.status() == SessionStatus::Open) {
    const PlayerId mover = playerToMove(history);
    Agent& agent = mover == PlayerId::P1 ? agentA : agentB;
    Message m = agent.act(history);
    if (m.act == SpeechAct::Propose) {
      if (!m.content || !domain.validBid(*m.content))
        throw SessionError(mover, std::string(agent.name()) +
                                      " proposed a bid outside the domain");
      if (history.proposeCount() >= roundCap) {
        capped = true;  // cap reached and the responder did not accept
        break;
      }
    }
    logMessage(transcript, domain, history.size(), m);
    history.append(std::move(m));
  }

  result.rounds = history.proposeCount();
  if (!capped && history.status() == SessionStatus::Agreed) {
    result.terminal = TerminalKind::Accept;
    result.outcome = *history.messages()[history.size() - 2].content;
    result.utility1 = profileA.utility(*result.outcome);
    result.utility2 = profileB.utility(*result.outcome);
  } else if (!capped && history.status() == SessionStatus::Failed) {
    result.terminal = TerminalKind::Reject;
    result.utility1 = profileA.reserve;
    result.utility2 = profileB.reserve;
  } else {
    result.terminal = TerminalKind::RoundCap;
    result.utility1 = profileA.reserve;
    result.utility2 = profileB.reserve;
  }
  return result;
}

}  // namespace nego
