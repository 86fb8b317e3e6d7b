#pragma once
// changeset.hpp — add/delete deltas, normalization, folder ingest.

#include <zlib.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "coevo/dataset.hpp"
#include "coevo/errors.hpp"
#include "coevo/ntriples.hpp"

namespace coevo {

struct Changeset {
  Dataset added;
  Dataset deleted;
  std::string label;  // sequence tag from the source folder, may be empty

  bool operator==(const Changeset& o) const { return added == o.added && deleted == o.deleted; }
};

// A changeset reduced to disjoint add/delete sets. Triples both added and
// deleted within the window cancel out but are kept as tombstones: during
// synchronization a tombstone still suppresses the same triple arriving
// from the other replica and removes it from the pre-existing state.
struct SideDelta {
  Changeset changes;
  Dataset tombstones;

  bool operator==(const SideDelta& o) const {
    return changes == o.changes && tombstones == o.tombstones;
  }
};

inline SideDelta normalize(const Changeset& c) {
  SideDelta out;
  out.changes.label = c.label;
  Dataset overlap = set_intersect(c.added, c.deleted);
  out.changes.added = set_minus(c.added, overlap);
  out.changes.deleted = set_minus(c.deleted, overlap);
  out.tombstones = overlap;
  return out;
}

// Folds a sequence of changesets into one net delta. Later additions cancel
// earlier deletions of the same triple and vice versa; an addition later
// deleted in the window becomes a tombstone.
inline SideDelta merge_changesets(const std::vector<Changeset>& sequence) {
  SideDelta out;
  for (const auto& raw : sequence) {
    SideDelta step = normalize(raw);
    for (const auto& t : step.tombstones) out.tombstones.insert(t);
    for (const auto& t : step.changes.added) {
      if (out.changes.deleted.contains(t)) {
        out.changes.deleted.erase(t);  // delete-then-add restores
        if (out.tombstones.contains(t)) {
          // The earlier delete had cancelled an in-window add; this add wins.
          out.tombstones.erase(t);
          out.changes.added.insert(t);
        }
      } else {
        out.changes.added.insert(t);
      }
    }
    for (const auto& t : step.changes.deleted) {
      if (out.changes.added.contains(t)) {
        out.changes.added.erase(t);
        out.tombstones.insert(t);  // add-then-delete never reaches the other side
      }
      out.changes.deleted.insert(t);
    }
    if (!raw.label.empty()) out.changes.label = raw.label;
  }
  // A step whose halves cancel contributes only a tombstone. If the triple is
  // net-added by another step the add wins: a pending addition must not be
  // suppressed on the other side.
  out.tombstones = set_minus(out.tombstones, out.changes.added);
  return out;
}

// (d \ deleted) ∪ added. Deletions of absent triples are collected into
// missing when requested; they are warnings, not errors.
inline Dataset apply(const Dataset& d, const Changeset& c,
                     std::vector<Triple>* missing = nullptr) {
  Dataset out;
  for (const auto& t : d)
    if (!c.deleted.contains(t)) out.insert(t);
  for (const auto& t : c.deleted)
    if (missing && !d.contains(t)) missing->push_back(t);
  for (const auto& t : c.added) out.insert(t);
  return out;
}

inline Changeset diff(const Dataset& before, const Dataset& after) {
  Changeset out;
  out.added = set_minus(after, before);
  out.deleted = set_minus(before, after);
  return out;
}

namespace detail {

inline std::string slurp_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

inline std::string gunzip(const std::string& compressed, const std::string& name) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) throw IngestError("zlib init failed for " + name);
  std::string out;
  out.reserve(compressed.size() * 4);
  char buf[1 << 16];
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  int rc = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw IngestError("corrupt gzip stream in " + name);
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (rc != Z_STREAM_END && zs.avail_in > 0);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) throw IngestError("truncated gzip stream in " + name);
  return out;
}

inline Dataset read_ntriples_file(const std::filesystem::path& path) {
  std::string data = slurp_file(path);
  if (path.extension() == ".gz") data = gunzip(data, path.filename().string());
  return parse_ntriples(data);
}

}  // namespace detail

// Reads a changeset folder laid out as NNNNNN.added.nt[.gz] and
// NNNNNN.removed.nt[.gz]. A sequence number may provide either half or
// both; the result is ordered by sequence number and gap-free.
inline std::vector<Changeset> load_changesets(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IngestError("not a changeset folder: " + dir.string());

  struct Halves {
    fs::path added;
    fs::path removed;
  };
  std::map<long, Halves> by_seq;
  std::map<long, std::string> labels;

  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    std::string stem = name;
    bool gz = false;
    if (stem.size() > 3 && stem.ends_with(".gz")) {
      gz = true;
      stem.resize(stem.size() - 3);
    }
    if (!stem.ends_with(".nt")) continue;
    stem.resize(stem.size() - 3);
    size_t dot = stem.rfind('.');
    if (dot == std::string::npos)
      throw IngestError("unrecognized changeset file name: " + name);
    std::string kind = stem.substr(dot + 1);
    std::string seq_text = stem.substr(0, dot);
    if (kind != "added" && kind != "removed")
      throw IngestError("unrecognized changeset file name: " + name);
    if (seq_text.empty() || seq_text.find_first_not_of("0123456789") != std::string::npos)
      throw IngestError("non-numeric sequence in changeset file name: " + name);
    long seq = std::stol(seq_text);
    auto& halves = by_seq[seq];
    fs::path& slot = kind == "added" ? halves.added : halves.removed;
    if (!slot.empty())
      throw IngestError("duplicate " + kind + " file for sequence " + seq_text +
                        (gz ? " (plain and gzip)" : ""));
    slot = entry.path();
    labels[seq] = seq_text;
  }

  if (by_seq.empty()) return {};
  long expected = by_seq.begin()->first;
  std::vector<Changeset> out;
  for (const auto& [seq, halves] : by_seq) {
    if (seq != expected)
      throw IngestError("gap in changeset sequence: expected " + std::to_string(expected) +
                        ", found " + std::to_string(seq));
    ++expected;
    Changeset c;
    c.label = labels[seq];
    if (!halves.added.empty()) c.added = detail::read_ntriples_file(halves.added);
    if (!halves.removed.empty()) c.deleted = detail::read_ntriples_file(halves.removed);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace coevo
