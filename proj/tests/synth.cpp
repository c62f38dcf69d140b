#include "synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <sstream>

#include "json.hpp"

namespace synth {

namespace {

struct Rng {
  std::mt19937 engine;
  explicit Rng(std::uint32_t seed) : engine(seed) {}
  std::uint32_t next(std::uint32_t bound) { return engine() % bound; }
  double unit() { return static_cast<double>(engine() % 1000000) / 1000000.0; }
};

const char* kFirstNames[] = {"Avery",  "Blake",   "Casey",  "Devon",  "Emery",
                             "Finley", "Harper",  "Indigo", "Jordan", "Kendall",
                             "Logan",  "Morgan",  "Noel",   "Oakley", "Parker",
                             "Quinn",  "Reese",   "Sage",   "Taylor", "Umber"};
const char* kLastNames[] = {"Abbott",  "Barnes",   "Carver",   "Dalton",  "Ellison",
                            "Fairfax", "Gaines",   "Hollis",   "Ingram",  "Jessup",
                            "Keating", "Lambert",  "Mercer",   "Norwood", "Osgood",
                            "Prescott", "Quimby",  "Rutledge", "Sterling", "Thorne"};

std::string random_word(Rng& rng) {
  const std::size_t len = 4 + rng.next(5);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) {
    out.push_back(static_cast<char>('a' + rng.next(26)));
  }
  return out;
}

// Template 0 is the only one the seed «$Q , $S said» matches.
std::string render(int template_id, const std::string& quote, const std::string& name) {
  const std::string q = "\"" + quote + "\"";
  switch (template_id) {
    case 0: return q + ", " + name + " said.";
    case 1: return q + ", said " + name + ".";
    case 2: return q + ", said spokesman " + name + ".";
    case 3: return name + " told reporters: " + q + ".";
    case 4: return q + ", " + name + " added.";
    case 5: return "According to " + name + ", " + q + ".";
    case 6: return name + " stated: " + q + ".";
    case 7: return q + ", " + name + " announced yesterday.";
    case 8: return "As " + name + " put it: " + q + ".";
    case 9: return q + ", remarked " + name + ".";
    case 10: return q + ", " + name + " continued.";
    case 11: return name + " declared: " + q + ".";
    case 12: return q + ", explained " + name + ".";
    case 13: return q + ", noted analyst " + name + ".";
    case 14: return name + " wrote: " + q + ".";
    case 15: return q + ", insisted " + name + ".";
    case 16: return "Speaking on Monday, " + name + " said: " + q + ".";
    case 17: return q + ", argued " + name + ".";
    case 18: return q + ", " + name + " concluded.";
    case 19: return name + " responded: " + q + ".";
    case 20: return q + ", claimed " + name + ".";
    case 21: return q + ", warned " + name + ".";
    case 22: return "In a statement, " + name + " said: " + q + ".";
    case 23: return q + ", observed " + name + ".";
    case 24: return name + " admitted: " + q + ".";
    case 25: return q + ", repeated " + name + ".";
    case 26: return q + ", " + name + " noted.";
    case 27: return name + " shouted: " + q + ".";
    case 28: return q + ", suggested " + name + ".";
    default: return q + ", mentioned " + name + ".";
  }
}

// Distractor strictly nearer than the speaker. The first form puts the
// distractor between quote and speaker (no pattern can bridge it); the
// second keeps it outside the pair span, so a pattern remains learnable.
std::string render_nearer(int variant, const std::string& quote, const std::string& name,
                          const std::string& distractor) {
  const std::string q = "\"" + quote + "\"";
  if (variant == 0) {
    return q + ". " + distractor + " stood by as " + name + " spoke.";
  }
  return "With " + distractor + " nearby, " + q + " was heard before " + name +
         " commented.";
}

constexpr int kTemplates = 30;
constexpr std::size_t kAnchorPairs = 60;  // extra seed-template coverage

}  // namespace

SynthCorpus generate(const SynthConfig& config) {
  Rng rng(config.seed);
  SynthCorpus out;

  // Speakers and their aliases (full names only; ids are unambiguous).
  std::vector<std::string> names;
  std::vector<std::string> ids;
  {
    std::ostringstream aliases;
    for (std::size_t i = 0; i < config.speakers; ++i) {
      const std::string name = std::string(kFirstNames[i % 20]) + " " +
                               kLastNames[(i / 20) % 20] +
                               (i >= 400 ? std::to_string(i) : "");
      char id[32];
      std::snprintf(id, sizeof id, "P%04zu", i);
      names.push_back(name);
      ids.push_back(id);
      aliases << name << "\t" << id << "\t1\n";
    }
    out.aliases_tsv = aliases.str();
  }

  // Planted pairs: unique random-word quotes, heavy-tailed redundancy.
  std::vector<std::vector<std::string>> quote_tokens(config.pairs);
  std::vector<std::size_t> speaker_of(config.pairs);
  std::vector<std::size_t> count_of(config.pairs);
  for (std::size_t i = 0; i < config.pairs; ++i) {
    const std::size_t len = 6 + rng.next(19);
    for (std::size_t j = 0; j < len; ++j) quote_tokens[i].push_back(random_word(rng));
    speaker_of[i] = rng.next(static_cast<std::uint32_t>(config.speakers));
    const double u = rng.unit();
    std::size_t n;
    if (u < 0.50) {
      n = 1;
    } else if (u < 0.70) {
      n = 2;
    } else if (u < 0.82) {
      n = 3;
    } else if (u < 0.88) {
      n = 4;
    } else if (u < 0.95) {
      n = 5 + rng.next(4);   // 5..8
    } else {
      n = 9 + rng.next(12);  // 9..20
    }
    if (i < kAnchorPairs) n = std::max<std::size_t>(n, 4);
    count_of[i] = n;
  }

  std::vector<bool> nearer(config.pairs, false);
  if (config.nearer_distractors) {
    for (std::size_t i = kAnchorPairs; i < config.pairs; ++i) {
      if (i % 2 == 1) nearer[i] = true;
    }
  }

  // Occurrence sentences. Anchors spend their first occurrence on the
  // seed template; their remaining occurrences rotate through the other
  // templates so every template re-extracts enough known pairs to clear
  // the support cutoff in the first inference round.
  struct Occurrence {
    std::size_t pair;
    std::string sentence;
  };
  std::vector<Occurrence> occurrences;
  int rotor = 1;
  for (std::size_t i = 0; i < config.pairs; ++i) {
    const std::string& name = names[speaker_of[i]];
    std::string full_text;
    for (std::size_t t = 0; t < quote_tokens[i].size(); ++t) {
      if (t) full_text.push_back(' ');
      full_text += quote_tokens[i][t];
    }
    for (std::size_t j = 0; j < count_of[i]; ++j) {
      // Long quotes occasionally occur abridged; the shared-run grouping
      // must fold them back into one cluster.
      std::string text = full_text;
      if (j > 0 && quote_tokens[i].size() >= 12 && rng.next(4) == 0) {
        text.clear();
        for (std::size_t t = 0; t + 2 < quote_tokens[i].size(); ++t) {
          if (t) text.push_back(' ');
          text += quote_tokens[i][t];
        }
      }
      std::string sentence;
      if (nearer[i]) {
        std::size_t d = rng.next(static_cast<std::uint32_t>(config.speakers));
        if (d == speaker_of[i]) d = (d + 1) % config.speakers;
        sentence = render_nearer(static_cast<int>((i + j) % 2), text, name, names[d]);
      } else {
        int template_id;
        if (i < kAnchorPairs) {
          if (j == 0) {
            template_id = 0;
          } else {
            template_id = rotor;
            rotor = rotor + 1 == kTemplates ? 1 : rotor + 1;
          }
        } else {
          template_id = static_cast<int>((i + j) % kTemplates);
        }
        sentence = render(template_id, text, name);
        if (rng.unit() < config.distractor_rate) {
          std::size_t d = rng.next(static_cast<std::uint32_t>(config.speakers));
          if (d == speaker_of[i]) d = (d + 1) % config.speakers;
          sentence = "Standing beside " + names[d] + ", " + sentence;
        }
      }
      occurrences.push_back({i, std::move(sentence)});
    }
    PlantedPair planted;
    planted.quote_text = full_text;
    planted.speaker_id = ids[speaker_of[i]];
    planted.occurrences = count_of[i];
    planted.distractor_nearer = nearer[i];
    out.pairs.push_back(std::move(planted));
  }

  // Spread occurrences across documents with a fixed stride; every
  // document gets a unique filler sentence so exact-duplicate removal
  // never merges them.
  std::vector<std::vector<std::string>> doc_sentences(config.documents);
  for (std::size_t k = 0; k < occurrences.size(); ++k) {
    doc_sentences[(k * 7919) % config.documents].push_back(occurrences[k].sentence);
  }
  std::ostringstream corpus;
  for (std::size_t d = 0; d < config.documents; ++d) {
    std::string body = "Dispatch " + std::to_string(d) + " from the wire desk. ";
    for (const std::string& sentence : doc_sentences[d]) {
      body += sentence;
      body.push_back(' ');
    }
    body += "Filed under section " + std::to_string(d % 17) + ".";
    nlohmann::json rec;
    char id[32];
    std::snprintf(id, sizeof id, "doc%05zu", d);
    rec["id"] = id;
    rec["site"] = "site" + std::to_string(d % 37) + ".example";
    rec["date"] = nullptr;
    rec["content"] = body;
    corpus << rec.dump() << "\n";
  }
  out.corpus_ndjson = corpus.str();

  std::ostringstream gt;
  for (const PlantedPair& p : out.pairs) {
    gt << p.quote_text << "\t" << p.speaker_id << "\t1\n";
  }
  out.ground_truth_tsv = gt.str();
  return out;
}

}  // namespace synth
