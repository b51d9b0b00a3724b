#include <string>

#include "onreg/errors.hpp"
#include "onreg/io.hpp"
#include "onreg/protocol.hpp"

namespace onreg {

std::string transcript_to_csv(const Transcript& transcript) {
  CsvTable csv;
  csv.header = {"t", "x", "y_hat", "y", "loss", "cum_loss"};
  double cumulative = 0.0;
  for (std::size_t t = 0; t < transcript.rounds.size(); ++t) {
    const Round& r = transcript.rounds[t];
    cumulative += r.loss;
    std::string x;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      if (i) x += ';';
      x += format_double(r.x[i]);
    }
    csv.rows.push_back({std::to_string(t + 1), std::move(x), format_double(r.y_hat),
                        format_double(r.y), format_double(r.loss), format_double(cumulative)});
  }
  return to_csv_text(csv);
}

void write_transcript_csv(const Transcript& transcript, const std::string& path) {
  write_text_file(path, transcript_to_csv(transcript));
}

Transcript parse_transcript_csv(std::string_view text) {
  const CsvTable csv = parse_csv(text);
  const std::vector<std::string> expected = {"t", "x", "y_hat", "y", "loss", "cum_loss"};
  if (csv.header != expected) throw DomainError("not a transcript CSV (unexpected header)");
  Transcript transcript;
  for (const auto& row : csv.rows) {
    if (row.size() != expected.size()) throw DomainError("transcript row has wrong field count");
    Round r;
    std::string_view xs = row[1];
    while (!xs.empty()) {
      const std::size_t semi = xs.find(';');
      r.x.push_back(parse_double(xs.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      xs.remove_prefix(semi + 1);
    }
    r.y_hat = parse_double(row[2]);
    r.y = parse_double(row[3]);
    r.loss = parse_double(row[4]);
    transcript.cumulative_loss += r.loss;
    transcript.rounds.push_back(std::move(r));
  }
  return transcript;
}

}  // namespace onreg
