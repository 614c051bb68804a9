#include "trmax/io.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

static_assert(std::endian::native == std::endian::little,
              "problem files are little-endian; big-endian hosts unsupported");

namespace trmax::io {

namespace {

constexpr char kMagic[4] = {'T', 'R', 'P', 'B'};
constexpr std::uint32_t kVersion = 1;

void write_row_major(std::ofstream& out, const Matrix& m) {
  std::vector<double> row(static_cast<size_t>(m.cols()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      row[static_cast<size_t>(j)] = m(i, j);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
}

Matrix read_row_major(std::ifstream& in, Index rows, Index cols,
                      const std::filesystem::path& path) {
  Matrix m(rows, cols);
  std::vector<double> row(static_cast<size_t>(cols));
  for (Index i = 0; i < rows; ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) {
      throw IoError("truncated problem file: " + path.string());
    }
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = row[static_cast<size_t>(j)];
    }
  }
  return m;
}

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) {
    throw IoError("truncated problem file: " + path.string());
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

void write_problem(const std::filesystem::path& path,
                   const TraceRatioProblem& p) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint64_t>(p.n()));
  write_pod(out, static_cast<std::uint64_t>(p.k()));
  write_pod(out, p.theta());
  write_row_major(out, p.a().matrix());
  write_row_major(out, p.b().matrix());
  write_row_major(out, p.d());
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

TraceRatioProblem read_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open: " + path.string());
  }
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not a problem file (bad magic): " + path.string());
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kVersion) {
    throw IoError("unsupported problem file version " +
                  std::to_string(version) + ": " + path.string());
  }
  const auto n = static_cast<Index>(read_pod<std::uint64_t>(in, path));
  const auto k = static_cast<Index>(read_pod<std::uint64_t>(in, path));
  const auto theta = read_pod<double>(in, path);
  if (n < 2 || k < 1 || k >= n || n > (1 << 20)) {
    throw IoError("implausible dimensions in problem file: " + path.string());
  }
  Matrix a = read_row_major(in, n, n, path);
  Matrix b = read_row_major(in, n, n, path);
  Matrix d = read_row_major(in, n, k, path);
  return TraceRatioProblem(
      SymmetricMatrix(std::move(a), SymmetricMatrix::Input::Strict),
      SymmetricMatrix(std::move(b), SymmetricMatrix::Input::Strict),
      std::move(d), theta);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open: " + path.string());
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    while (ptr < end) {
      double value = 0;
      const auto [next, ec] = std::from_chars(ptr, end, value);
      if (ec != std::errc{}) {
        throw IoError(path.string() + ":" + std::to_string(line_no) +
                      ": cannot parse number");
      }
      row.push_back(value);
      ptr = next;
      if (ptr < end) {
        if (*ptr != ',') {
          throw IoError(path.string() + ":" + std::to_string(line_no) +
                        ": expected ','");
        }
        ++ptr;
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) +
                    ": ragged row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError("empty matrix file: " + path.string());
  }
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return m;
}

void write_dataset(const std::filesystem::path& dir,
                   const MultiViewDataset& ds) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["classes"] = ds.classes();
  manifest["samples"] = ds.samples();
  manifest["labels"] = "labels.csv";
  std::vector<std::string> view_files;
  for (Index s = 0; s < ds.view_count(); ++s) {
    const std::string name = "view" + std::to_string(s) + ".csv";
    write_matrix_csv(dir / name, ds.view(s));
    view_files.push_back(name);
  }
  manifest["views"] = view_files;

  std::ofstream labels(dir / "labels.csv", std::ios::trunc);
  if (!labels) {
    throw IoError("cannot open for writing: " + (dir / "labels.csv").string());
  }
  for (int y : ds.labels()) {
    labels << y << '\n';
  }

  std::ofstream mf(dir / "manifest.json", std::ios::trunc);
  if (!mf) {
    throw IoError("cannot open for writing: " +
                  (dir / "manifest.json").string());
  }
  mf << manifest.dump(2) << '\n';
}

MultiViewDataset read_dataset(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  std::ifstream mf(manifest_path);
  if (!mf) {
    throw IoError("cannot open: " + manifest_path.string());
  }
  nlohmann::json manifest;
  try {
    mf >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("views") || !manifest.contains("labels") ||
      !manifest.contains("classes")) {
    throw IoError(manifest_path.string() +
                  ": manifest needs 'views', 'labels', and 'classes'");
  }

  std::vector<Matrix> views;
  for (const auto& name : manifest["views"]) {
    const auto path = dir / name.get<std::string>();
    try {
      views.push_back(read_matrix_csv(path));
    } catch (const IoError& e) {
      throw IoError("view file " + path.string() + ": " + e.what());
    }
  }
  if (views.empty()) {
    throw IoError(manifest_path.string() + ": no views listed");
  }

  const auto labels_path = dir / manifest["labels"].get<std::string>();
  std::ifstream lf(labels_path);
  if (!lf) {
    throw IoError("cannot open: " + labels_path.string());
  }
  std::vector<int> labels;
  std::string line;
  size_t line_no = 0;
  while (std::getline(lf, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    int value = 0;
    const auto [next, ec] =
        std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec != std::errc{}) {
      throw IoError(labels_path.string() + ":" + std::to_string(line_no) +
                    ": cannot parse label");
    }
    labels.push_back(value);
  }

  const int classes = manifest["classes"].get<int>();
  try {
    return MultiViewDataset::from_labels(std::move(views), labels, classes);
  } catch (const std::exception& e) {
    throw IoError("dataset in " + dir.string() + " is inconsistent: " +
                  e.what());
  }
}

}  // namespace trmax::io
