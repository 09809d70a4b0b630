#include "negotiation/transcript.hpp"

#include <ostream>

#include "negotiation/csv.hpp"

namespace negotiation {

const char kTranscriptSchema[] = "# schema: negotiation.transcript v1";

std::string to_string(EventType t) {
  switch (t) {
    case EventType::kOffer: return "offer";
    case EventType::kAccept: return "accept";
    case EventType::kReject: return "reject";
    case EventType::kClampWarning: return "clamp_warning";
  }
  return "?";
}

std::string to_string(EndState s) {
  return s == EndState::kAccepted ? "accepted" : "conflict_deal";
}

std::string to_string(Side s) { return s == Side::kA ? "a" : "b"; }

void write_transcript_csv(std::ostream& os, std::span<const Transcript> games) {
  os << kTranscriptSchema << '\n';
  os << "game_id,round,actor,action";
  const int m = games.empty() ? 0 : games.front().issues;
  for (int i = 1; i <= m; ++i) os << ",share_" << i;
  os << ",reward_a,reward_b,end_state\n";
  for (std::size_t g = 0; g < games.size(); ++g) {
    const Transcript& t = games[g];
    for (const Event& e : t.events) {
      os << g << ',' << e.round << ',' << to_string(e.actor) << ','
         << to_string(e.type);
      for (int i = 0; i < m; ++i) {
        os << ',';
        if (i < static_cast<int>(e.shares.size()))
          os << csv_double(e.shares[i]);
      }
      os << ',' << csv_double(t.reward_a) << ',' << csv_double(t.reward_b)
         << ',' << to_string(t.end_state) << '\n';
    }
  }
}

}  // namespace negotiation
