#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bitext/corpus.hpp"
#include "bitext/utf8.hpp"

// Template-grammar generator for parallel German / English / French text.
// It gives the bench, the tests and the demo pipeline realistic-looking,
// reproducible data: inflected articles and adjectives, verb-second and
// verb-final German word order, post-nominal French adjectives and elision.
namespace bitext::synthetic {

// Portable seeded helpers; std distributions differ across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

enum class Gender { m, f, n };

struct Noun {
  const char* en;
  const char* de;
  Gender de_gender;
  const char* fr;
  bool fr_fem;
  bool animate;
};

struct Verb {
  const char* en;
  const char* de;
  const char* fr;
};

struct Adjective {
  const char* en;
  const char* de;  // stem, endings appended
  const char* fr_m;
  const char* fr_f;
};

struct Adverb {
  const char* en;
  const char* de;
  const char* fr;
};

struct Preposition {
  const char* en;
  const char* de;  // governs the dative
  const char* fr;
};

inline constexpr std::array kNouns = {
    Noun{"man", "Mann", Gender::m, "homme", false, true},
    Noun{"woman", "Frau", Gender::f, "femme", true, true},
    Noun{"child", "Kind", Gender::n, "enfant", false, true},
    Noun{"dog", "Hund", Gender::m, "chien", false, true},
    Noun{"cat", "Katze", Gender::f, "chat", false, true},
    Noun{"teacher", "Lehrer", Gender::m, "professeur", false, true},
    Noun{"doctor", "Arzt", Gender::m, "médecin", false, true},
    Noun{"minister", "Minister", Gender::m, "ministre", false, true},
    Noun{"president", "Präsident", Gender::m, "président", false, true},
    Noun{"government", "Regierung", Gender::f, "gouvernement", false, true},
    Noun{"company", "Firma", Gender::f, "entreprise", true, true},
    Noun{"police", "Polizei", Gender::f, "police", true, true},
    Noun{"student", "Student", Gender::m, "étudiant", false, true},
    Noun{"farmer", "Bauer", Gender::m, "paysan", false, true},
    Noun{"neighbour", "Nachbar", Gender::m, "voisin", false, true},
    Noun{"player", "Spieler", Gender::m, "joueur", false, true},
    Noun{"team", "Mannschaft", Gender::f, "équipe", true, true},
    Noun{"court", "Gericht", Gender::n, "tribunal", false, true},
    Noun{"bank", "Bank", Gender::f, "banque", true, true},
    Noun{"city", "Stadt", Gender::f, "ville", true, false},
    Noun{"house", "Haus", Gender::n, "maison", true, false},
    Noun{"car", "Auto", Gender::n, "voiture", true, false},
    Noun{"book", "Buch", Gender::n, "livre", false, false},
    Noun{"letter", "Brief", Gender::m, "lettre", true, false},
    Noun{"road", "Straße", Gender::f, "route", true, false},
    Noun{"school", "Schule", Gender::f, "école", true, false},
    Noun{"garden", "Garten", Gender::m, "jardin", false, false},
    Noun{"window", "Fenster", Gender::n, "fenêtre", true, false},
    Noun{"table", "Tisch", Gender::m, "table", true, false},
    Noun{"door", "Tür", Gender::f, "porte", true, false},
    Noun{"river", "Fluss", Gender::m, "rivière", true, false},
    Noun{"bridge", "Brücke", Gender::f, "pont", false, false},
    Noun{"market", "Markt", Gender::m, "marché", false, false},
    Noun{"law", "Gesetz", Gender::n, "loi", true, false},
    Noun{"report", "Bericht", Gender::m, "rapport", false, false},
    Noun{"plan", "Plan", Gender::m, "projet", false, false},
    Noun{"price", "Preis", Gender::m, "prix", false, false},
    Noun{"question", "Frage", Gender::f, "question", true, false},
    Noun{"answer", "Antwort", Gender::f, "réponse", true, false},
    Noun{"decision", "Entscheidung", Gender::f, "décision", true, false},
    Noun{"meeting", "Sitzung", Gender::f, "réunion", true, false},
    Noun{"election", "Wahl", Gender::f, "élection", true, false},
    Noun{"country", "Land", Gender::n, "pays", false, false},
    Noun{"world", "Welt", Gender::f, "monde", false, false},
    Noun{"money", "Geld", Gender::n, "argent", false, false},
    Noun{"water", "Wasser", Gender::n, "eau", true, false},
    Noun{"bread", "Brot", Gender::n, "pain", false, false},
    Noun{"film", "Film", Gender::m, "film", false, false},
    Noun{"game", "Spiel", Gender::n, "match", false, false},
    Noun{"station", "Bahnhof", Gender::m, "gare", true, false},
    Noun{"hospital", "Krankenhaus", Gender::n, "hôpital", false, false},
    Noun{"computer", "Computer", Gender::m, "ordinateur", false, false},
    Noun{"phone", "Telefon", Gender::n, "téléphone", false, false},
    Noun{"newspaper", "Zeitung", Gender::f, "journal", false, false},
    Noun{"problem", "Problem", Gender::n, "problème", false, false},
    Noun{"idea", "Idee", Gender::f, "idée", true, false},
    Noun{"contract", "Vertrag", Gender::m, "contrat", false, false},
    Noun{"budget", "Haushalt", Gender::m, "budget", false, false},
    Noun{"tree", "Baum", Gender::m, "arbre", false, false},
    Noun{"shop", "Laden", Gender::m, "magasin", false, false},
};

inline constexpr std::array kTransitive = {
    Verb{"sees", "sieht", "voit"},         Verb{"buys", "kauft", "achète"},
    Verb{"sells", "verkauft", "vend"},     Verb{"finds", "findet", "trouve"},
    Verb{"needs", "braucht", "a besoin de"}, Verb{"visits", "besucht", "visite"},
    Verb{"builds", "baut", "construit"},   Verb{"reads", "liest", "lit"},
    Verb{"writes", "schreibt", "écrit"},   Verb{"opens", "öffnet", "ouvre"},
    Verb{"closes", "schließt", "ferme"},   Verb{"likes", "mag", "aime"},
    Verb{"loves", "liebt", "adore"},       Verb{"knows", "kennt", "connaît"},
    Verb{"supports", "unterstützt", "soutient"}, Verb{"rejects", "lehnt ab", "rejette"},
    Verb{"discusses", "diskutiert", "discute"}, Verb{"checks", "prüft", "vérifie"},
    Verb{"changes", "ändert", "change"},   Verb{"wins", "gewinnt", "gagne"},
    Verb{"loses", "verliert", "perd"},     Verb{"presents", "präsentiert", "présente"},
    Verb{"explains", "erklärt", "explique"}, Verb{"orders", "bestellt", "commande"},
    Verb{"repairs", "repariert", "répare"}, Verb{"describes", "beschreibt", "décrit"},
    Verb{"publishes", "veröffentlicht", "publie"}, Verb{"criticises", "kritisiert", "critique"},
};

inline constexpr std::array kIntransitive = {
    Verb{"sleeps", "schläft", "dort"},     Verb{"works", "arbeitet", "travaille"},
    Verb{"waits", "wartet", "attend"},     Verb{"laughs", "lacht", "rit"},
    Verb{"lives", "wohnt", "habite"},      Verb{"arrives", "kommt an", "arrive"},
    Verb{"speaks", "spricht", "parle"},    Verb{"plays", "spielt", "joue"},
    Verb{"stays", "bleibt", "reste"},      Verb{"travels", "reist", "voyage"},
    Verb{"eats", "isst", "mange"},         Verb{"sings", "singt", "chante"},
};

inline constexpr std::array kAdjectives = {
    Adjective{"big", "groß", "grand", "grande"},
    Adjective{"small", "klein", "petit", "petite"},
    Adjective{"old", "alt", "vieux", "vieille"},
    Adjective{"new", "neu", "nouveau", "nouvelle"},
    Adjective{"young", "jung", "jeune", "jeune"},
    Adjective{"good", "gut", "bon", "bonne"},
    Adjective{"beautiful", "schön", "beau", "belle"},
    Adjective{"important", "wichtig", "important", "importante"},
    Adjective{"expensive", "teuer", "cher", "chère"},
    Adjective{"cheap", "billig", "bon marché", "bon marché"},
    Adjective{"local", "lokal", "local", "locale"},
    Adjective{"national", "national", "national", "nationale"},
    Adjective{"red", "rot", "rouge", "rouge"},
    Adjective{"black", "schwarz", "noir", "noire"},
    Adjective{"quiet", "ruhig", "calme", "calme"},
    Adjective{"famous", "berühmt", "célèbre", "célèbre"},
    Adjective{"strange", "seltsam", "étrange", "étrange"},
    Adjective{"long", "lang", "long", "longue"},
};

inline constexpr std::array kTimeAdverbs = {
    Adverb{"Today", "Heute", "Aujourd'hui"},    Adverb{"Now", "Jetzt", "Maintenant"},
    Adverb{"Tomorrow", "Morgen", "Demain"},     Adverb{"Often", "Oft", "Souvent"},
    Adverb{"Sometimes", "Manchmal", "Parfois"}, Adverb{"Again", "Wieder", "De nouveau"},
    Adverb{"Finally", "Schließlich", "Finalement"}, Adverb{"Unfortunately", "Leider", "Malheureusement"},
};

inline constexpr std::array kPrepositions = {
    Preposition{"in", "in", "dans"},      Preposition{"near", "bei", "près de"},
    Preposition{"with", "mit", "avec"},   Preposition{"behind", "hinter", "derrière"},
    Preposition{"after", "nach", "après"}, Preposition{"from", "von", "de"},
};

struct Connective {
  const char* en;
  const char* de;
  const char* fr;
  bool de_verb_final;
};

inline constexpr std::array kConnectives = {
    Connective{"and", "und", "et", false},           Connective{"but", "aber", "mais", false},
    Connective{"because", "weil", "parce que", true}, Connective{"while", "während", "pendant que", true},
    Connective{"although", "obwohl", "bien que", true}, Connective{"when", "wenn", "quand", true},
};

struct ParallelSentence {
  std::string de;
  std::string en;
  std::string fr;
};

namespace detail {

enum class Case { nom, acc, dat };

struct NounPhrase {
  std::string en, de, fr;
};

inline bool starts_with_vowel(std::string_view w) {
  if (w.empty()) return false;
  const auto cps = utf8::decode(w.substr(0, std::min<std::size_t>(w.size(), 4)));
  const char32_t c = utf8::to_lower(cps.front());
  return std::u32string_view(U"aeiouyhéèêâîôû").find(c) != std::u32string_view::npos;
}

inline std::string capitalize(const std::string& s) {
  auto cps = utf8::decode(s);
  if (!cps.empty()) {
    const char32_t c = cps.front();
    if (c >= U'a' && c <= U'z') cps.front() = c - 32;
    else if (c >= 0xE0 && c <= 0xFE && c != 0xF7) cps.front() = c - 32;
  }
  return utf8::encode(cps);
}

inline const char* de_definite(Gender g, Case c) {
  static constexpr const char* table[3][3] = {
      {"der", "den", "dem"}, {"die", "die", "der"}, {"das", "das", "dem"}};
  return table[static_cast<int>(g)][static_cast<int>(c)];
}

inline const char* de_indefinite(Gender g, Case c) {
  static constexpr const char* table[3][3] = {
      {"ein", "einen", "einem"}, {"eine", "eine", "einer"}, {"ein", "ein", "einem"}};
  return table[static_cast<int>(g)][static_cast<int>(c)];
}

inline std::string de_adjective(const std::string& stem, Gender g, Case c, bool definite) {
  // Weak endings after the definite article, mixed endings after "ein".
  std::string ending;
  if (c == Case::dat) {
    ending = "en";
  } else if (definite) {
    ending = (c == Case::acc && g == Gender::m) ? "en" : "e";
  } else if (c == Case::acc && g == Gender::m) {
    ending = "en";
  } else {
    ending = g == Gender::m ? "er" : g == Gender::f ? "e" : "es";
  }
  if (stem == "teuer") return "teur" + ending;
  return stem + ending;
}

inline std::string fr_article(const Noun& noun, bool definite, bool with_de) {
  if (!definite) return noun.fr_fem ? "une " : "un ";
  if (starts_with_vowel(noun.fr)) return with_de ? "de l'" : "l'";
  if (with_de) return noun.fr_fem ? "de la " : "du ";
  return noun.fr_fem ? "la " : "le ";
}

}  // namespace detail

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  ParallelSentence sentence() {
    ParallelSentence s;
    const std::size_t shape = rng_.below(10);
    if (shape < 4) {
      s = clause(/*allow_adverb=*/true);
    } else if (shape < 6) {
      s = intransitive_clause(true);
    } else {
      const auto& conn = kConnectives[rng_.below(kConnectives.size())];
      const auto first = rng_.chance(0.5) ? clause(false) : intransitive_clause(false);
      const auto second = rng_.chance(0.5) ? clause(false, conn.de_verb_final)
                                            : intransitive_clause(false, conn.de_verb_final);
      s.en = first.en + ", " + conn.en + " " + lower_first(second.en);
      s.de = first.de + ", " + conn.de + " " + lower_first_article(second.de);
      s.fr = first.fr + ", " + conn.fr + " " + lower_first_article(second.fr);
      if (std::string_view(conn.fr) == "parce que" || std::string_view(conn.fr) == "bien que") elide_que(s.fr);
    }
    const char* end = rng_.chance(0.1) ? "!" : ".";
    s.en += end;
    s.de += end;
    s.fr += end;
    return s;
  }

  std::vector<ParallelSentence> corpus(std::size_t n) {
    std::vector<ParallelSentence> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sentence());
    return out;
  }

 private:
  static std::string lower_first(const std::string& s) {
    // English clauses start with "The"/"A" or a proper adverb; only articles are lowered.
    if (s.rfind("The ", 0) == 0) return "the" + s.substr(3);
    if (s.rfind("A ", 0) == 0) return "a" + s.substr(1);
    if (s.rfind("An ", 0) == 0) return "an" + s.substr(2);
    return s;
  }
  static std::string lower_first_article(const std::string& s) {
    for (const char* art : {"Der ", "Die ", "Das ", "Ein ", "Eine ", "Le ", "La ", "L'", "Un ", "Une "}) {
      const std::string a(art);
      if (s.rfind(a, 0) == 0) {
        std::string lowered = a;
        lowered[0] = static_cast<char>(lowered[0] + 32);
        return lowered + s.substr(a.size());
      }
    }
    return s;
  }
  static void elide_que(std::string& fr) {
    for (const char* v : {"que un ", "que une "}) {
      const std::string from(v);
      const auto pos = fr.find(from);
      if (pos != std::string::npos) fr.replace(pos, 4, "qu'");
    }
  }

  detail::NounPhrase noun_phrase(const Noun& noun, detail::Case c, bool with_adj) {
    const bool definite = rng_.chance(0.7);
    detail::NounPhrase np;
    const Adjective* adj = with_adj ? &kAdjectives[rng_.below(kAdjectives.size())] : nullptr;

    const std::string en_noun = adj ? std::string(adj->en) + " " + noun.en : std::string(noun.en);
    if (definite) {
      np.en = "the " + en_noun;
    } else {
      np.en = (std::string_view("aeiou").find(en_noun[0]) != std::string_view::npos ? "an " : "a ") + en_noun;
    }

    const char* art = definite ? detail::de_definite(noun.de_gender, c) : detail::de_indefinite(noun.de_gender, c);
    np.de = std::string(art) + " ";
    if (adj) np.de += detail::de_adjective(adj->de, noun.de_gender, c, definite) + " ";
    np.de += noun.de;

    const std::string fr_adj = adj ? std::string(noun.fr_fem ? adj->fr_f : adj->fr_m) : std::string();
    std::string fr_art = detail::fr_article(noun, definite, false);
    np.fr = fr_art + noun.fr;
    if (adj) np.fr += " " + fr_adj;
    return np;
  }

  const Noun& subject_noun() {
    while (true) {
      const auto& n = kNouns[rng_.below(kNouns.size())];
      if (n.animate) return n;
    }
  }

  // Optional trailing prepositional phrase (German dative).
  void maybe_pp(ParallelSentence& s, std::vector<std::string>* de_tail = nullptr) {
    if (!rng_.chance(0.45)) return;
    const auto& prep = kPrepositions[rng_.below(kPrepositions.size())];
    const auto& noun = kNouns[rng_.below(kNouns.size())];
    const auto np = noun_phrase(noun, detail::Case::dat, rng_.chance(0.3));
    s.en += std::string(" ") + prep.en + " " + np.en;
    std::string de_np = np.de;
    std::string de_pp = std::string(prep.de) + " " + de_np;
    if (std::string_view(prep.de) == "in" && de_np.rfind("dem ", 0) == 0) de_pp = "im " + de_np.substr(4);
    if (std::string_view(prep.de) == "bei" && de_np.rfind("dem ", 0) == 0) de_pp = "beim " + de_np.substr(4);
    if (std::string_view(prep.de) == "von" && de_np.rfind("dem ", 0) == 0) de_pp = "vom " + de_np.substr(4);
    if (de_tail) {
      de_tail->push_back(de_pp);
    } else {
      s.de += " " + de_pp;
    }
    std::string fr_pp = std::string(prep.fr) + " " + np.fr;
    const std::string_view fp(prep.fr);
    if (fp == "de" || fp == "près de") {
      const std::string base(fp == "de" ? "" : "près ");
      if (np.fr.rfind("le ", 0) == 0) fr_pp = base + "du " + np.fr.substr(3);
      else if (np.fr.rfind("l'", 0) == 0) fr_pp = base + "de " + np.fr;
      else if (np.fr.rfind("un", 0) == 0) fr_pp = base + "d'" + np.fr;
    }
    s.fr += " " + fr_pp;
  }

  ParallelSentence clause(bool allow_adverb, bool de_verb_final = false) {
    ParallelSentence s;
    const auto& subj = subject_noun();
    const auto& obj = kNouns[rng_.below(kNouns.size())];
    const auto& verb = kTransitive[rng_.below(kTransitive.size())];
    const auto subj_np = noun_phrase(subj, detail::Case::nom, rng_.chance(0.35));
    const auto obj_np = noun_phrase(obj, detail::Case::acc, rng_.chance(0.35));
    const Adverb* adv = allow_adverb && rng_.chance(0.3) ? &kTimeAdverbs[rng_.below(kTimeAdverbs.size())] : nullptr;

    // German separable verbs ("lehnt ab") split around the object.
    const std::string de_verb(verb.de);
    const auto space = de_verb.find(' ');
    const std::string de_finite = space == std::string::npos ? de_verb : de_verb.substr(0, space);
    const std::string de_particle = space == std::string::npos ? "" : de_verb.substr(space + 1);

    s.en = subj_np.en + " " + verb.en + " " + obj_np.en;
    s.fr = subj_np.fr + " " + fr_verb_object(verb, obj_np.fr);
    std::vector<std::string> de_tail;
    maybe_pp(s, &de_tail);
    std::string de_rest;
    for (const auto& t : de_tail) de_rest += " " + t;

    if (de_verb_final) {
      // Separable particles rejoin the verb at the end of a subordinate clause.
      s.de = subj_np.de + " " + obj_np.de + de_rest + " " + de_particle + de_finite;
    } else if (adv) {
      s.de = std::string(adv->de) + " " + de_finite + " " + subj_np.de + " " + obj_np.de + de_rest +
             (de_particle.empty() ? "" : " " + de_particle);
    } else {
      s.de = subj_np.de + " " + de_finite + " " + obj_np.de + de_rest + (de_particle.empty() ? "" : " " + de_particle);
    }
    if (adv) {
      s.en = std::string(adv->en) + " " + s.en;
      s.fr = std::string(adv->fr) + ", " + s.fr;
    } else {
      s.en = detail::capitalize(s.en);
      s.fr = detail::capitalize(s.fr);
    }
    s.de = detail::capitalize(s.de);
    return s;
  }

  ParallelSentence intransitive_clause(bool allow_adverb, bool de_verb_final = false) {
    ParallelSentence s;
    const auto& subj = subject_noun();
    const auto& verb = kIntransitive[rng_.below(kIntransitive.size())];
    const auto subj_np = noun_phrase(subj, detail::Case::nom, rng_.chance(0.35));
    const Adverb* adv = allow_adverb && rng_.chance(0.3) ? &kTimeAdverbs[rng_.below(kTimeAdverbs.size())] : nullptr;
    const std::string de_verb(verb.de);
    const auto space = de_verb.find(' ');
    const std::string de_finite = space == std::string::npos ? de_verb : de_verb.substr(0, space);
    const std::string de_particle = space == std::string::npos ? "" : de_verb.substr(space + 1);

    s.en = subj_np.en + " " + verb.en;
    s.fr = subj_np.fr + " " + verb.fr;
    std::vector<std::string> de_tail;
    maybe_pp(s, &de_tail);
    std::string de_rest;
    for (const auto& t : de_tail) de_rest += " " + t;
    if (de_verb_final) {
      s.de = subj_np.de + de_rest + " " + de_particle + de_finite;
    } else if (adv) {
      s.de = std::string(adv->de) + " " + de_finite + " " + subj_np.de + de_rest +
             (de_particle.empty() ? "" : " " + de_particle);
    } else {
      s.de = subj_np.de + " " + de_finite + de_rest + (de_particle.empty() ? "" : " " + de_particle);
    }
    if (adv) {
      s.en = std::string(adv->en) + " " + s.en;
      s.fr = std::string(adv->fr) + ", " + s.fr;
    } else {
      s.en = detail::capitalize(s.en);
      s.fr = detail::capitalize(s.fr);
    }
    s.de = detail::capitalize(s.de);
    return s;
  }

  static std::string fr_verb_object(const Verb& verb, const std::string& obj_np) {
    const std::string v(verb.fr);
    // "avoir besoin de" contracts with the following article.
    if (v.size() > 3 && v.compare(v.size() - 3, 3, " de") == 0) {
      const std::string head = v.substr(0, v.size() - 3);
      if (obj_np.rfind("le ", 0) == 0) return head + " du " + obj_np.substr(3);
      if (obj_np.rfind("la ", 0) == 0) return head + " de la " + obj_np.substr(3);
      if (obj_np.rfind("l'", 0) == 0) return head + " de " + obj_np;
      if (obj_np.rfind("un ", 0) == 0 || obj_np.rfind("une ", 0) == 0) return head + " d'" + obj_np;
    }
    return v + " " + obj_np;
  }

  Rng rng_;
};

// Words of every surface form grouped by concept, for building embeddings.
// Keys are lowercased surface tokens; values index the concept.
inline std::map<std::string, std::size_t> concept_index() {
  std::map<std::string, std::size_t> index;
  std::size_t concept_id = 0;
  const auto add = [&](std::string_view forms) {
    for (const auto& tok : tokenize(forms)) index.emplace(utf8::to_lower(tok), concept_id);
    ++concept_id;
  };
  for (const auto& n : kNouns) add(std::string(n.en) + " " + n.de + " " + n.fr);
  for (const auto& v : kTransitive) add(std::string(v.en) + " " + v.de + " " + v.fr);
  for (const auto& v : kIntransitive) add(std::string(v.en) + " " + v.de + " " + v.fr);
  for (const auto& a : kAdjectives) {
    const std::string st(a.de);
    const std::string de_stem = st == "teuer" ? "teur" : st;
    add(std::string(a.en) + " " + st + " " + de_stem + "e " + de_stem + "en " + de_stem + "er " + de_stem + "es " +
        a.fr_m + " " + a.fr_f);
  }
  for (const auto& a : kTimeAdverbs) add(std::string(a.en) + " " + a.de + " " + a.fr);
  for (const auto& p : kPrepositions) add(std::string(p.en) + " " + p.de + " " + p.fr);
  for (const auto& c : kConnectives) add(std::string(c.en) + " " + c.de + " " + c.fr);
  add("the der die das den dem des le la les l' du im beim vom");
  add("a an ein eine einen einem einer un une d'");
  return index;
}

// word2vec text format: "count dim" header, then "token v1 ... vdim".
// Every surface form of a concept shares the concept vector plus small noise,
// so mean-pooled translations land close together.
inline std::string embeddings_text(std::uint64_t seed, std::size_t dim = 32, double noise = 0.15) {
  Rng rng(seed);
  const auto index = concept_index();
  std::size_t concepts = 0;
  for (const auto& [w, c] : index) concepts = std::max(concepts, c + 1);
  std::vector<std::vector<double>> base(concepts, std::vector<double>(dim));
  for (auto& v : base)
    for (double& x : v) x = rng.gaussian();
  std::string out = std::to_string(index.size()) + " " + std::to_string(dim) + "\n";
  for (const auto& [word, c] : index) {
    out += word;
    for (std::size_t k = 0; k < dim; ++k) out += " " + format_score(base[c][k] + noise * rng.gaussian());
    out += "\n";
  }
  return out;
}

// Random digit and punctuation tokens, the junk class of the noise bench.
inline std::string junk_line(Rng& rng) {
  static constexpr std::array pieces = {"--", "...", "!!!", "|", "#", "*", "(", ")", "/", "%", "+", "=", ":"};
  const std::size_t n = 2 + rng.below(6);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    if (rng.chance(0.6)) {
      const std::size_t digits = 1 + rng.below(5);
      for (std::size_t d = 0; d < digits; ++d) out += static_cast<char>('0' + rng.below(10));
      if (rng.chance(0.3)) out += rng.chance(0.5) ? "." : ",";
    } else {
      out += pieces[rng.below(pieces.size())];
    }
  }
  return out;
}

}  // namespace bitext::synthetic
