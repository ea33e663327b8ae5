#include "qslack/pauli.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qslack {

namespace {

constexpr const char *kPauliChars = "IXYZ";

struct ParsedTerm {
    double sign = 1.0;
    cplx coeff{1.0, 0.0};
    std::string label;
};

cplx parse_coefficient(const std::string &tok) {
    if (!tok.empty() && (tok.back() == 'i' || tok.back() == 'j')) {
        const std::string body = tok.substr(0, tok.size() - 1);
        const double im = body.empty() || body == "+" ? 1.0 : body == "-" ? -1.0 : std::stod(body);
        return {0.0, im};
    }
    return {std::stod(tok), 0.0};
}

bool looks_numeric(const std::string &tok) {
    return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok[0])) || tok[0] == '.' ||
                            ((tok[0] == '-' || tok[0] == '+') && tok.size() > 1));
}

// "c LABEL + c LABEL - LABEL ..." -> list of (coefficient, label)
std::vector<ParsedTerm> split_terms(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::vector<ParsedTerm> out;
    ParsedTerm cur;
    bool have_coeff = false;
    std::string tok;
    while (in >> tok) {
        if (tok == "+" || tok == "-") {
            if (!cur.label.empty() || have_coeff) {
                throw std::invalid_argument("observable text: dangling term before '" + tok + "'");
            }
            cur.sign *= tok == "-" ? -1.0 : 1.0;
            continue;
        }
        const auto star = tok.find('*');
        if (star != std::string::npos) {
            cur.coeff = parse_coefficient(tok.substr(0, star));
            cur.label = tok.substr(star + 1);
        } else if (looks_numeric(tok) && !have_coeff) {
            cur.coeff = parse_coefficient(tok);
            have_coeff = true;
            continue;
        } else {
            cur.label = tok;
        }
        out.push_back(cur);
        cur = ParsedTerm{};
        have_coeff = false;
    }
    if (have_coeff || cur.sign != 1.0) {
        throw std::invalid_argument("observable text: trailing coefficient or sign");
    }
    return out;
}

} // namespace

PauliString::PauliString(std::vector<std::uint8_t> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw std::invalid_argument("PauliString: need at least one qubit");
    }
    for (auto l : labels_) {
        if (l > 3) {
            throw std::invalid_argument("PauliString: label outside {0,1,2,3}");
        }
    }
}

PauliString PauliString::parse(std::string_view text) {
    std::vector<std::uint8_t> labels;
    for (char ch : text) {
        switch (ch) {
        case 'I': labels.push_back(0); break;
        case 'X': labels.push_back(1); break;
        case 'Y': labels.push_back(2); break;
        case 'Z': labels.push_back(3); break;
        default:
            throw std::invalid_argument("PauliString: bad character in '" + std::string(text) + "'");
        }
    }
    return PauliString(std::move(labels));
}

PauliString PauliString::identity(std::size_t n) {
    return PauliString(std::vector<std::uint8_t>(n, 0));
}

PauliString PauliString::from_index(std::size_t index, std::size_t n) {
    std::vector<std::uint8_t> labels(n);
    for (std::size_t q = n; q-- > 0;) {
        labels[q] = static_cast<std::uint8_t>(index % 4);
        index /= 4;
    }
    return PauliString(std::move(labels));
}

bool PauliString::is_identity() const noexcept { return count(0) == labels_.size(); }

std::size_t PauliString::count(std::uint8_t label) const noexcept {
    std::size_t c = 0;
    for (auto l : labels_) {
        c += l == label;
    }
    return c;
}

std::size_t PauliString::index() const noexcept {
    std::size_t idx = 0;
    for (auto l : labels_) {
        idx = idx * 4 + l;
    }
    return idx;
}

std::string PauliString::to_string() const {
    std::string s;
    for (auto l : labels_) {
        s.push_back(kPauliChars[l]);
    }
    return s;
}

PauliString PauliString::tensor(const PauliString &other) const {
    auto labels = labels_;
    labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
    return PauliString(std::move(labels));
}

ComplexMatrix pauli_matrix(std::uint8_t label) {
    const cplx i{0.0, 1.0};
    switch (label) {
    case 0: return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, 1.0});
    case 1: return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0});
    case 2: return ComplexMatrix(2, 2, {0.0, -i, i, 0.0});
    case 3: return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0});
    default: throw std::invalid_argument("pauli_matrix: label outside {0,1,2,3}");
    }
}

ComplexMatrix dense(const PauliString &p) {
    ComplexMatrix m = pauli_matrix(p[0]);
    for (std::size_t q = 1; q < p.n_qubits(); ++q) {
        m = kron(m, pauli_matrix(p[q]));
    }
    return m;
}

cplx pauli_trace(const PauliString &p, const ComplexMatrix &m) {
    const std::size_t n = p.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    if (!m.is_square() || m.rows() != dim) {
        throw DimensionError("pauli_trace: qubit count mismatch");
    }
    std::size_t flip = 0;
    std::size_t zmask = 0;
    std::size_t ymask = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t bit = std::size_t{1} << (n - 1 - q);
        switch (p[q]) {
        case 1: flip |= bit; break;
        case 2: flip |= bit; ymask |= bit; break;
        case 3: zmask |= bit; break;
        default: break;
        }
    }
    // P|k> = i^{#Y} (-1)^{popcount(k & (ymask|zmask))} |k ^ flip>
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const cplx yphase = ipow[p.count(2) % 4];
    const std::size_t signmask = ymask | zmask;
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < dim; ++k) {
        const cplx v = m(k, k ^ flip);
        s += (__builtin_popcountll(k & signmask) & 1U) ? -v : v;
    }
    return yphase * s;
}

std::size_t default_term_cap(std::size_t n) {
    return n <= 2 ? (std::size_t{1} << (2 * n)) : 64;
}

PauliObservable::PauliObservable(std::size_t n, std::size_t term_cap)
    : n_(n), cap_(term_cap == 0 ? default_term_cap(n) : term_cap) {
    if (n == 0) {
        throw std::invalid_argument("PauliObservable: need at least one qubit");
    }
}

PauliObservable PauliObservable::parse(std::string_view text) {
    const auto parsed = split_terms(text);
    if (parsed.empty()) {
        throw std::invalid_argument("PauliObservable: empty text");
    }
    const auto first = PauliString::parse(parsed.front().label);
    PauliObservable o(first.n_qubits(), std::size_t{1} << (2 * first.n_qubits()));
    for (const auto &t : parsed) {
        o.add_term(PauliString::parse(t.label), t.sign * t.coeff);
    }
    return o;
}

void PauliObservable::add_term(const PauliString &p, cplx coeff) {
    set_term(p, coefficient(p) + coeff);
}

void PauliObservable::set_term(const PauliString &p, cplx coeff) {
    if (p.n_qubits() != n_) {
        throw DimensionError("PauliObservable: string length differs from observable");
    }
    if (coeff == cplx{0.0, 0.0}) {
        terms_.erase(p);
        return;
    }
    if (!terms_.contains(p) && terms_.size() >= cap_) {
        throw std::length_error("PauliObservable: term cap exceeded");
    }
    terms_[p] = coeff;
}

cplx PauliObservable::coefficient(const PauliString &p) const {
    const auto it = terms_.find(p);
    return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
}

bool PauliObservable::is_hermitian() const noexcept {
    for (const auto &[p, c] : terms_) {
        if (c.imag() != 0.0) {
            return false;
        }
    }
    return true;
}

std::string PauliObservable::to_string() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto &[p, c] : terms_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        if (c.imag() == 0.0) {
            os << c.real() << ' ' << p.to_string();
        } else {
            os << c.real() << ' ' << p.to_string() << " + " << c.imag() << "i " << p.to_string();
        }
    }
    return os.str();
}

double PauliObservable::coeff_norm_sq() const noexcept {
    double s = 0.0;
    for (const auto &[p, c] : terms_) {
        s += std::norm(c);
    }
    return s;
}

ComplexMatrix observable_dense(const PauliObservable &o) {
    const std::size_t dim = std::size_t{1} << o.n_qubits();
    ComplexMatrix m(dim, dim);
    for (const auto &[p, c] : o.terms()) {
        m += c * dense(p);
    }
    return m;
}

cplx expect(const PauliObservable &o, const ComplexMatrix &rho) {
    cplx s{0.0, 0.0};
    for (const auto &[p, c] : o.terms()) {
        s += c * pauli_trace(p, rho);
    }
    return s;
}

WalshString::WalshString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) {
        throw std::invalid_argument("WalshString: need at least one bit");
    }
    for (auto b : bits_) {
        if (b > 1) {
            throw std::invalid_argument("WalshString: label outside {0,1}");
        }
    }
}

WalshString WalshString::parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    for (char ch : text) {
        if (ch != '0' && ch != '1') {
            throw std::invalid_argument("WalshString: bad character in '" + std::string(text) + "'");
        }
        bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return WalshString(std::move(bits));
}

WalshString WalshString::zeros(std::size_t n) {
    return WalshString(std::vector<std::uint8_t>(n, 0));
}

std::size_t WalshString::mask() const noexcept {
    std::size_t m = 0;
    for (auto b : bits_) {
        m = (m << 1) | b;
    }
    return m;
}

std::string WalshString::to_string() const {
    std::string s;
    for (auto b : bits_) {
        s.push_back(static_cast<char>('0' + b));
    }
    return s;
}

std::vector<double> walsh_vector(const WalshString &w) {
    const std::size_t dim = std::size_t{1} << w.n_bits();
    const std::size_t m = w.mask();
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        v[i] = (__builtin_popcountll(i & m) & 1U) ? -1.0 : 1.0;
    }
    return v;
}

double walsh_dot(const WalshString &w, std::span<const double> p) {
    const std::size_t dim = std::size_t{1} << w.n_bits();
    if (p.size() != dim) {
        throw DimensionError("walsh_dot: length mismatch");
    }
    const std::size_t m = w.mask();
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        s += (__builtin_popcountll(i & m) & 1U) ? -p[i] : p[i];
    }
    return s;
}

WalshObservable::WalshObservable(std::size_t n) : n_(n) {
    if (n == 0) {
        throw std::invalid_argument("WalshObservable: need at least one bit");
    }
}

WalshObservable WalshObservable::parse(std::string_view text) {
    const auto parsed = split_terms(text);
    if (parsed.empty()) {
        throw std::invalid_argument("WalshObservable: empty text");
    }
    WalshObservable o(parsed.front().label.size());
    for (const auto &t : parsed) {
        if (t.coeff.imag() != 0.0) {
            throw std::invalid_argument("WalshObservable: coefficients must be real");
        }
        o.add_term(WalshString::parse(t.label), t.sign * t.coeff.real());
    }
    return o;
}

void WalshObservable::add_term(const WalshString &w, double coeff) {
    if (w.n_bits() != n_) {
        throw DimensionError("WalshObservable: string length differs from observable");
    }
    const double v = coefficient(w) + coeff;
    if (v == 0.0) {
        terms_.erase(w);
    } else {
        terms_[w] = v;
    }
}

double WalshObservable::coefficient(const WalshString &w) const {
    const auto it = terms_.find(w);
    return it == terms_.end() ? 0.0 : it->second;
}

double WalshObservable::coeff_norm_sq() const noexcept {
    double s = 0.0;
    for (const auto &[w, c] : terms_) {
        s += c * c;
    }
    return s;
}

std::string WalshObservable::to_string() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto &[w, c] : terms_) {
        os << (first ? "" : " + ") << c << ' ' << w.to_string();
        first = false;
    }
    return os.str();
}

std::vector<double> walsh_dense(const WalshObservable &o) {
    std::vector<double> v(std::size_t{1} << o.n_bits(), 0.0);
    for (const auto &[w, c] : o.terms()) {
        const auto s = walsh_vector(w);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] += c * s[i];
        }
    }
    return v;
}

std::vector<QubitBasis> pauli_eigenbasis_sampler(const PauliString &p) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    std::vector<QubitBasis> out;
    out.reserve(p.n_qubits());
    for (auto l : p.labels()) {
        QubitBasis b{};
        switch (l) {
        case 1:
            b.vectors = {{{r, r}, {r, -r}}};
            break;
        case 2:
            b.vectors = {{{r, r * i}, {r, -r * i}}};
            break;
        default:
            b.vectors = {{{1.0, 0.0}, {0.0, 1.0}}};
            break;
        }
        b.in_sign = l != 0;
        out.push_back(b);
    }
    return out;
}

std::vector<double> basis_outcome_distribution(const std::vector<QubitBasis> &bases,
                                               const ComplexMatrix &rho) {
    const std::size_t n = bases.size();
    const std::size_t dim = std::size_t{1} << n;
    if (rho.rows() != dim) {
        throw DimensionError("basis_outcome_distribution: qubit count mismatch");
    }
    std::vector<double> probs(dim);
    std::vector<cplx> phi(dim);
    for (std::size_t y = 0; y < dim; ++y) {
        // |phi_y> = tensor of per-qubit basis vectors
        for (std::size_t k = 0; k < dim; ++k) {
            cplx amp{1.0, 0.0};
            for (std::size_t q = 0; q < n; ++q) {
                const std::size_t shift = n - 1 - q;
                amp *= bases[q].vectors[(y >> shift) & 1U][(k >> shift) & 1U];
            }
            phi[k] = amp;
        }
        cplx v{0.0, 0.0};
        for (std::size_t a = 0; a < dim; ++a) {
            for (std::size_t b = 0; b < dim; ++b) {
                v += std::conj(phi[a]) * rho(a, b) * phi[b];
            }
        }
        probs[y] = v.real();
    }
    return probs;
}

} // namespace qslack
