#include "io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace qmc::io {

json matrix_to_json(const Mat& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Mat matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("re"))
        throw Error(ErrorKind::InvalidInput, "matrix needs rows, cols, re, im");
    const long rows = j.at("rows").get<long>();
    const long cols = j.at("cols").get<long>();
    if (rows < 0 || cols < 0) throw Error(ErrorKind::InvalidInput, "negative matrix shape");
    const auto& re = j.at("re");
    const json im = j.contains("im") ? j.at("im") : json::array();
    if (!re.is_array() || static_cast<long>(re.size()) != rows * cols ||
        (!im.empty() && static_cast<long>(im.size()) != rows * cols)) {
        std::ostringstream os;
        os << "matrix entries do not match shape " << rows << "x" << cols;
        throw Error(ErrorKind::DimensionMismatch, os.str());
    }
    Mat m(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r * cols + c);
            m(r, c) = cplx(re[idx].get<double>(), im.empty() ? 0.0 : im[idx].get<double>());
        }
    return m;
}

json complex_to_json(cplx z) {
    return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::InvalidInput, "complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json isometry_to_json(const Isometry& iso) {
    json ks = json::array();
    for (int i = 0; i < iso.k; ++i) ks.push_back(matrix_to_json(iso.kraus(i)));
    return {{"d", iso.d}, {"k", iso.k}, {"kraus", ks}};
}

Isometry isometry_from_json(const json& j, double tol) {
    if (!j.is_object() || !j.contains("kraus") || !j.at("kraus").is_array())
        throw Error(ErrorKind::InvalidInput, "isometry needs d, k, kraus");
    std::vector<Mat> ks;
    for (const auto& m : j.at("kraus")) ks.push_back(matrix_from_json(m));
    if (ks.empty()) throw Error(ErrorKind::InvalidInput, "empty Kraus list");
    if (j.contains("k") && j.at("k").get<long>() != static_cast<long>(ks.size()))
        throw Error(ErrorKind::UnitDimMismatch, "k does not match the number of Kraus operators");
    if (j.contains("d") && j.at("d").get<long>() != ks.front().rows())
        throw Error(ErrorKind::DimensionMismatch, "d does not match the Kraus operator size");
    return isometry_from_kraus(ks, tol);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace qmc::io
