#include "lrmt/metrics/tokenizer_13a.hpp"

#include "lrmt/text/utf8.hpp"

namespace lrmt::metrics {

namespace {

void replace_all(std::u32string& s, std::u32string_view from, std::u32string_view to) {
    std::u32string out;
    std::size_t pos = 0;
    while (true) {
        const auto hit = s.find(from, pos);
        if (hit == std::u32string::npos)
            break;
        out.append(s, pos, hit - pos);
        out.append(to);
        pos = hit + from.size();
    }
    out.append(s, pos, std::u32string::npos);
    s = std::move(out);
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
bool is_period_comma(char32_t c) { return c == U'.' || c == U','; }

// [\{-\~\[-\` -\&\(-\+\:-\@\/]
bool is_split_punct(char32_t c) {
    return (c >= U'{' && c <= U'~') || (c >= U'[' && c <= U'`') || (c >= U' ' && c <= U'&') ||
           (c >= U'(' && c <= U'+') || (c >= U':' && c <= U'@') || c == U'/';
}

std::vector<std::string> split_u32(const std::u32string& s) {
    std::vector<std::string> out;
    std::string cur;
    bool in_word = false;
    for (char32_t c : s) {
        if (text::is_split_space(c)) {
            if (in_word)
                out.push_back(std::move(cur));
            cur.clear();
            in_word = false;
        } else {
            text::append_utf8(cur, c);
            in_word = true;
        }
    }
    if (in_word)
        out.push_back(std::move(cur));
    return out;
}

} // namespace

std::vector<std::string> split_whitespace(std::string_view line) {
    return split_u32(text::decode(line));
}

std::vector<std::string> tokenize_13a(std::string_view line) {
    auto s = text::decode(line);
    while (!s.empty() && text::is_split_space(s.back()))
        s.pop_back();

    replace_all(s, U"<skipped>", U"");
    replace_all(s, U"-\n", U"");
    replace_all(s, U"\n", U" ");
    if (s.find(U'&') != std::u32string::npos) {
        replace_all(s, U"&quot;", U"\"");
        replace_all(s, U"&amp;", U"&");
        replace_all(s, U"&lt;", U"<");
        replace_all(s, U"&gt;", U">");
    }
    s = U" " + s + U" ";

    std::u32string a;
    for (char32_t c : s) {
        if (is_split_punct(c)) {
            a += U' ';
            a += c;
            a += U' ';
        } else {
            a += c;
        }
    }

    // The next three passes mirror non-overlapping left-to-right regex
    // substitution over two-character patterns.
    std::u32string b;
    for (std::size_t i = 0; i < a.size();) {
        if (i + 1 < a.size() && !is_digit(a[i]) && is_period_comma(a[i + 1])) {
            b += a[i];
            b += U' ';
            b += a[i + 1];
            b += U' ';
            i += 2;
        } else {
            b += a[i++];
        }
    }

    std::u32string c;
    for (std::size_t i = 0; i < b.size();) {
        if (i + 1 < b.size() && is_period_comma(b[i]) && !is_digit(b[i + 1])) {
            c += U' ';
            c += b[i];
            c += U' ';
            c += b[i + 1];
            i += 2;
        } else {
            c += b[i++];
        }
    }

    std::u32string d;
    for (std::size_t i = 0; i < c.size();) {
        if (i + 1 < c.size() && is_digit(c[i]) && c[i + 1] == U'-') {
            d += c[i];
            d += U' ';
            d += U'-';
            d += U' ';
            i += 2;
        } else {
            d += c[i++];
        }
    }
    return split_u32(d);
}

} // namespace lrmt::metrics
