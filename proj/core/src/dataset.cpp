#include "blendnet/data/dataset.hpp"

#include <fstream>

#include "blendnet/chem/smiles.hpp"
#include "blendnet/error.hpp"
#include "blendnet/text.hpp"

namespace blendnet::data {

const char* label_name(Label l) {
  return l == Label::Compatible ? "compatible" : "incompatible";
}

LoadResult load_entries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::MissingFile, path.string());
  }

  std::string line;
  int line_no = 0;

  // First non-comment line must be the schema header.
  bool saw_header = false;
  while (!saw_header && std::getline(in, line)) {
    ++line_no;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t != kDatasetHeader) {
      throw Error(Errc::BadHeader, "expected '" + std::string(kDatasetHeader) +
                                       "', got '" + std::string(t) + "'");
    }
    saw_header = true;
  }
  if (!saw_header) {
    throw Error(Errc::BadHeader, "file has no header row: " + path.string());
  }

  LoadResult result;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;

    auto reject = [&](const std::string& reason) {
      result.rejects.push_back({line_no, reason});
    };

    auto fields = split_csv_line(t);
    if (fields.size() != 5) {
      reject("expected 5 fields, got " + std::to_string(fields.size()));
      continue;
    }

    BlendEntry e;
    e.smiles_a = std::string(trim(fields[0]));
    e.smiles_b = std::string(trim(fields[1]));
    e.source_id = std::string(trim(fields[4]));

    if (!parse_double(trim(fields[2]), e.fraction_a)) {
      reject("fraction_a is not a number: '" + std::string(fields[2]) + "'");
      continue;
    }
    if (e.fraction_a < 0.0 || e.fraction_a > 1.0) {
      reject("fraction_a out of [0,1]: " + std::string(fields[2]));
      continue;
    }

    const std::string_view label = trim(fields[3]);
    if (label == "compatible") {
      e.label = Label::Compatible;
    } else if (label == "incompatible") {
      e.label = Label::Incompatible;
    } else {
      reject("unknown label '" + std::string(label) + "'");
      continue;
    }

    try {
      chem::parse_smiles(e.smiles_a);
      chem::parse_smiles(e.smiles_b);
    } catch (const ParseError& err) {
      reject(err.what());
      continue;
    }

    result.entries.push_back(std::move(e));
  }
  return result;
}

void save_entries(const std::filesystem::path& path,
                  const std::vector<BlendEntry>& entries) {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::IoError, "cannot write " + path.string());
  }
  out << kDatasetHeader << "\n";
  for (const BlendEntry& e : entries) {
    out << e.smiles_a << ',' << e.smiles_b << ',' << format_double(e.fraction_a)
        << ',' << label_name(e.label) << ',' << e.source_id << "\n";
  }
  if (!out.good()) {
    throw Error(Errc::IoError, "write failed: " + path.string());
  }
}

double incompatible_rate(const std::vector<BlendEntry>& entries) {
  if (entries.empty()) return 0.0;
  std::size_t n = 0;
  for (const BlendEntry& e : entries) {
    if (e.label == Label::Incompatible) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(entries.size());
}

}  // namespace blendnet::data
