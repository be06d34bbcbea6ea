// Copyright 2026 The ppcard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppcard/datagen.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string_view>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "ppcard/random.h"

namespace ppcard {
namespace {

constexpr std::array<std::string_view, 120> kGivenNames = {
    "James",   "Mary",     "John",     "Patricia", "Robert",  "Jennifer",
    "Michael", "Linda",    "William",  "Elizabeth", "David",  "Barbara",
    "Richard", "Susan",    "Joseph",   "Jessica",  "Thomas",  "Sarah",
    "Charles", "Karen",    "Christopher", "Nancy", "Daniel",  "Lisa",
    "Matthew", "Betty",    "Anthony",  "Margaret", "Mark",    "Sandra",
    "Donald",  "Ashley",   "Steven",   "Kimberly", "Paul",    "Emily",
    "Andrew",  "Donna",    "Joshua",   "Michelle", "Kenneth", "Dorothy",
    "Kevin",   "Carol",    "Brian",    "Amanda",   "George",  "Melissa",
    "Timothy", "Deborah",  "Ronald",   "Stephanie", "Edward", "Rebecca",
    "Jason",   "Sharon",   "Jeffrey",  "Laura",    "Ryan",    "Cynthia",
    "Jacob",   "Kathleen", "Gary",     "Amy",      "Nicholas", "Angela",
    "Eric",    "Shirley",  "Jonathan", "Anna",     "Stephen", "Brenda",
    "Larry",   "Pamela",   "Justin",   "Emma",     "Scott",   "Nicole",
    "Brandon", "Helen",    "Benjamin", "Samantha", "Samuel",  "Katherine",
    "Gregory", "Christine", "Alexander", "Debra",  "Frank",   "Rachel",
    "Patrick", "Carolyn",  "Raymond",  "Janet",    "Jack",    "Catherine",
    "Dennis",  "Maria",    "Jerry",    "Heather",  "Tyler",   "Diane",
    "Aaron",   "Ruth",     "Jose",     "Julie",    "Adam",    "Olivia",
    "Nathan",  "Joyce",    "Henry",    "Virginia", "Douglas", "Victoria",
    "Zachary", "Kelly",    "Peter",    "Lauren",   "Kyle",    "Christina",
};

constexpr std::array<std::string_view, 150> kSurnames = {
    "Smith",    "Johnson",   "Williams", "Brown",     "Jones",     "Garcia",
    "Miller",   "Davis",     "Rodriguez", "Martinez", "Hernandez", "Lopez",
    "Gonzalez", "Wilson",    "Anderson", "Thomas",    "Taylor",    "Moore",
    "Jackson",  "Martin",    "Lee",      "Perez",     "Thompson",  "White",
    "Harris",   "Sanchez",   "Clark",    "Ramirez",   "Lewis",     "Robinson",
    "Walker",   "Young",     "Allen",    "King",      "Wright",    "Scott",
    "Torres",   "Nguyen",    "Hill",     "Flores",    "Green",     "Adams",
    "Nelson",   "Baker",     "Hall",     "Rivera",    "Campbell",  "Mitchell",
    "Carter",   "Roberts",   "Gomez",    "Phillips",  "Evans",     "Turner",
    "Diaz",     "Parker",    "Cruz",     "Edwards",   "Collins",   "Reyes",
    "Stewart",  "Morris",    "Morales",  "Murphy",    "Cook",      "Rogers",
    "Gutierrez", "Ortiz",    "Morgan",   "Cooper",    "Peterson",  "Bailey",
    "Reed",     "Kelly",     "Howard",   "Ramos",     "Kim",       "Cox",
    "Ward",     "Richardson", "Watson",  "Brooks",    "Chavez",    "Wood",
    "James",    "Bennett",   "Gray",     "Mendoza",   "Ruiz",      "Hughes",
    "Price",    "Alvarez",   "Castillo", "Sanders",   "Patel",     "Myers",
    "Long",     "Ross",      "Foster",   "Jimenez",   "Powell",    "Jenkins",
    "Perry",    "Russell",   "Sullivan", "Bell",      "Coleman",   "Butler",
    "Henderson", "Barnes",   "Gonzales", "Fisher",    "Vasquez",   "Simmons",
    "Romero",   "Jordan",    "Patterson", "Alexander", "Hamilton", "Graham",
    "Reynolds", "Griffin",   "Wallace",  "Moreno",    "West",      "Cole",
    "Hayes",    "Bryant",    "Herrera",  "Gibson",    "Ellis",     "Tran",
    "Medina",   "Aguilar",   "Stevens",  "Murray",    "Ford",      "Castro",
    "Marshall", "Owens",     "Harrison", "Fernandez", "Mcdonald",  "Woods",
    "Washington", "Kennedy", "Wells",    "Vargas",    "Henry",     "Chen",
};

constexpr std::array<std::string_view, 80> kSuburbs = {
    "Raleigh",      "Charlotte",    "Greensboro",   "Durham",
    "Winston Salem", "Fayetteville", "Cary",        "Wilmington",
    "High Point",   "Concord",      "Asheville",    "Greenville",
    "Gastonia",     "Jacksonville", "Chapel Hill",  "Huntersville",
    "Apex",         "Burlington",   "Rocky Mount",  "Kannapolis",
    "Mooresville",  "Wake Forest",  "Wilson",       "Sanford",
    "Hickory",      "Indian Trail", "Mint Hill",    "Goldsboro",
    "Monroe",       "Salisbury",    "Holly Springs", "Matthews",
    "New Bern",     "Hillsborough",      "Cornelius",    "Garner",
    "Thomasville",  "Statesville",  "Asheboro",     "Mebane",
    "Kernersville", "Morrisville",  "Lumberton",    "Kinston",
    "Carrboro",     "Fuquay Varina", "Havelock",    "Shelby",
    "Clemmons",     "Lexington",    "Elizabeth City", "Boone",
    "Hope Mills",   "Clayton",      "Lenoir",       "Albemarle",
    "Morganton",    "Eden",         "Reidsville",   "Laurinburg",
    "Graham",       "Henderson",    "Newton",       "Roanoke Rapids",
    "Smithfield",   "Southern Pines", "Lincolnton", "Tarboro",
    "Waynesville",  "Hendersonville", "Oxford",     "Pinehurst",
    "Kings Mountain", "Mount Airy", "Washington",   "Dunn",
    "Selma",        "Siler City",   "Belmont",      "Wendell",
};

constexpr std::string_view kLetters = "abcdefghijklmnopqrstuvwxyz";

char RandomLetter(Rng& rng) { return kLetters[UniformIndex(rng, kLetters.size())]; }

template <size_t N>
std::string Pick(const std::array<std::string_view, N>& lexicon, Rng& rng) {
  return std::string(lexicon[UniformIndex(rng, N)]);
}

// One random edit that is guaranteed to change `s`.
std::string RandomEdit(const std::string& s, const std::vector<EditOp>& ops,
                       Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const EditOp op = ops[UniformIndex(rng, ops.size())];
    std::string out;
    switch (op) {
      case EditOp::kInsert:
        out = ApplyEdit(s, op, UniformIndex(rng, s.size() + 1), RandomLetter(rng));
        break;
      case EditOp::kDelete:
      case EditOp::kSubstitute:
        if (s.empty()) continue;
        out = ApplyEdit(s, op, UniformIndex(rng, s.size()), RandomLetter(rng));
        break;
      case EditOp::kTranspose:
        if (s.size() < 2) continue;
        out = ApplyEdit(s, op, UniformIndex(rng, s.size() - 1), 'a');
        break;
    }
    if (out != s) return out;
  }
  return s + RandomLetter(rng);
}

}  // namespace

std::string_view EditOpName(EditOp op) {
  switch (op) {
    case EditOp::kInsert:
      return "insert";
    case EditOp::kDelete:
      return "delete";
    case EditOp::kSubstitute:
      return "substitute";
    case EditOp::kTranspose:
      return "transpose";
  }
  return "insert";
}

absl::StatusOr<EditOp> ParseEditOp(std::string_view name) {
  for (EditOp op : {EditOp::kInsert, EditOp::kDelete, EditOp::kSubstitute,
                    EditOp::kTranspose}) {
    if (EditOpName(op) == name) return op;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown edit op '", std::string(name), "'"));
}

absl::Status CorruptionConfig::Validate() const {
  if (!(record_corruption_fraction >= 0 && record_corruption_fraction <= 1)) {
    return absl::InvalidArgumentError("corruption fraction must be in [0, 1]");
  }
  if (min_edits < 1 || max_edits < min_edits) {
    return absl::InvalidArgumentError("need 1 <= min_edits <= max_edits");
  }
  if (record_corruption_fraction > 0 && edit_ops.empty()) {
    return absl::InvalidArgumentError("corruption needs at least one edit op");
  }
  return absl::OkStatus();
}

std::vector<PlainRecord> GenerateEntities(int n, uint64_t seed) {
  Rng rng(DeriveSeed(seed, 0x656e74));
  std::vector<PlainRecord> out;
  out.reserve(std::max(n, 0));
  std::set<std::vector<std::string>> seen;
  for (int i = 0; i < n; ++i) {
    PlainRecord r;
    // Redraw the rare exact collision so entities stay distinguishable.
    do {
      const std::string postcode = absl::StrFormat(
          "%d%03d", 27 + static_cast<int>(UniformIndex(rng, 2)),
          static_cast<int>(UniformIndex(rng, 1000)));
      r.values = {Pick(kGivenNames, rng), Pick(kSurnames, rng),
                  Pick(kSuburbs, rng), postcode,
                  UniformIndex(rng, 2) == 0 ? "f" : "m"};
    } while (!seen.insert(r.values).second);
    r.entity_id = absl::StrFormat("voter-%06d", i + 1);
    out.push_back(std::move(r));
  }
  return out;
}

std::string ApplyEdit(std::string_view s, EditOp op, size_t pos, char letter) {
  std::string out(s);
  switch (op) {
    case EditOp::kInsert:
      out.insert(out.begin() + static_cast<long>(std::min(pos, out.size())), letter);
      break;
    case EditOp::kDelete:
      if (!out.empty()) out.erase(std::min(pos, out.size() - 1), 1);
      break;
    case EditOp::kSubstitute:
      if (!out.empty()) out[std::min(pos, out.size() - 1)] = letter;
      break;
    case EditOp::kTranspose:
      if (out.size() >= 2) {
        const size_t p = std::min(pos, out.size() - 2);
        std::swap(out[p], out[p + 1]);
      }
      break;
  }
  return out;
}

absl::StatusOr<std::vector<PlainRecord>> DuplicateAndCorrupt(
    const std::vector<PlainRecord>& entities, const DuplicateConfig& dup,
    const CorruptionConfig& corruption) {
  if (entities.empty()) {
    return absl::InvalidArgumentError("no entities to duplicate");
  }
  if (dup.min_duplicates < 0 || dup.max_duplicates < dup.min_duplicates) {
    return absl::InvalidArgumentError("need 0 <= min_duplicates <= max_duplicates");
  }
  if (absl::Status s = corruption.Validate(); !s.ok()) return s;

  const RecordSchema schema = PersonSchema();
  std::vector<size_t> string_attrs;
  for (size_t i = 0; i < schema.size(); ++i) {
    if (schema.attributes()[i].kind == AttributeKind::kString) {
      string_attrs.push_back(i);
    }
  }

  Rng dup_rng(DeriveSeed(corruption.seed, 1));
  std::vector<PlainRecord> out;
  // (output index, source entity) of every duplicate.
  std::vector<std::pair<size_t, size_t>> duplicates;
  for (size_t e = 0; e < entities.size(); ++e) {
    if (entities[e].values.size() != schema.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("entity ", e, " does not match the person schema"));
    }
    out.push_back(entities[e]);
    const int span = dup.max_duplicates - dup.min_duplicates + 1;
    const int count = dup.min_duplicates +
                      static_cast<int>(UniformIndex(dup_rng, static_cast<uint64_t>(span)));
    for (int d = 0; d < count; ++d) {
      duplicates.emplace_back(out.size(), e);
      out.push_back(entities[e]);
    }
  }

  const auto num_corrupt = static_cast<size_t>(std::lround(
      corruption.record_corruption_fraction * static_cast<double>(duplicates.size())));
  Rng rng(DeriveSeed(corruption.seed, 2));
  Shuffle(duplicates, rng);
  for (size_t j = 0; j < num_corrupt; ++j) {
    PlainRecord& rec = out[duplicates[j].first];
    const PlainRecord& original = entities[duplicates[j].second];
    const int span = corruption.max_edits - corruption.min_edits + 1;
    const int edits = corruption.min_edits +
                      static_cast<int>(UniformIndex(rng, static_cast<uint64_t>(span)));
    for (int attempt = 0; attempt < 16 && rec.values == original.values; ++attempt) {
      for (int k = 0; k < edits; ++k) {
        std::string& v = rec.values[string_attrs[UniformIndex(rng, string_attrs.size())]];
        v = RandomEdit(v, corruption.edit_ops, rng);
      }
    }
  }
  return out;
}

absl::StatusOr<DatasetBundle> SplitProviders(std::vector<PlainRecord> records,
                                             int num_providers, uint64_t seed) {
  if (num_providers < 1) {
    return absl::InvalidArgumentError("need at least one provider");
  }
  Rng rng(DeriveSeed(seed, 3));
  Shuffle(records, rng);
  DatasetBundle bundle;
  bundle.providers.resize(static_cast<size_t>(num_providers));
  for (int p = 0; p < num_providers; ++p) {
    bundle.providers[p].id = absl::StrCat("provider-", p + 1);
  }
  for (size_t i = 0; i < records.size(); ++i) {
    bundle.providers[i % bundle.providers.size()].records.push_back(
        std::move(records[i]));
  }
  bundle.k_true = CountEntities(bundle);
  return bundle;
}

int CountEntities(const DatasetBundle& bundle) {
  std::set<std::string> ids;
  for (const Provider& p : bundle.providers) {
    for (const PlainRecord& r : p.records) {
      if (r.entity_id) ids.insert(*r.entity_id);
    }
  }
  return static_cast<int>(ids.size());
}

}  // namespace ppcard
