#include "zoneseg/synthetic.hpp"

#include <array>
#include <cctype>
#include <span>
#include <string_view>

#include <fmt/format.h>

#include "zoneseg/error.hpp"
#include "zoneseg/features.hpp"
#include "zoneseg/random.hpp"

namespace zoneseg {
namespace {

using Words = std::span<const std::string_view>;

enum Lang { kEn, kPt, kEs, kFr, kLangCount };
constexpr std::array<std::string_view, kLangCount> kLangTags = {"en", "pt", "es", "fr"};

// Per-language, per-domain surface material. Index [domain][lang].
struct Lexicon {
  Words greetings;       // "{}" is replaced by a first name
  Words closings;
  Words prose;           // sentence vocabulary
  Words headings;
  std::string_view quote_marker;  // fmt pattern: date, name, address
  std::array<std::string_view, 4> header_keys;  // from, sent, to, subject
  Words client_lines;    // mail client signatures and list footers
  Words titles;
};

// ---- domain A -------------------------------------------------------------

constexpr std::string_view kGreetEnA[] = {"Hi {},", "Hello {},", "Dear {},", "Hi all,"};
constexpr std::string_view kGreetPtA[] = {"Olá {},", "Oi {},", "Caro {},", "Bom dia,"};
constexpr std::string_view kGreetEsA[] = {"Hola {},", "Estimado {},", "Buenos días,",
                                          "Querido {},"};
constexpr std::string_view kGreetFrA[] = {"Bonjour {},", "Salut {},", "Cher {},", "Bonsoir,"};

constexpr std::string_view kCloseEnA[] = {"Best regards,", "Thanks,", "Cheers,"};
constexpr std::string_view kClosePtA[] = {"Abraços,", "Obrigado,", "Atenciosamente,"};
constexpr std::string_view kCloseEsA[] = {"Saludos,", "Gracias,", "Un saludo,"};
constexpr std::string_view kCloseFrA[] = {"Cordialement,", "Merci,", "Amicalement,"};

constexpr std::string_view kProseEnA[] = {
    "the", "build", "fails", "when", "I", "run", "tests", "on", "my", "machine", "after",
    "upgrading", "package", "server", "patch", "looks", "good", "but", "we", "should",
    "check", "release", "notes", "before", "merging", "it", "into", "branch", "config",
    "option", "seems", "ignored", "by", "installer", "could", "you", "please", "review",
    "this", "change", "again", "tomorrow", "documentation", "mentions", "a", "workaround"};
constexpr std::string_view kProsePtA[] = {
    "o", "servidor", "não", "responde", "quando", "tento", "compilar", "projeto", "com",
    "a", "nova", "versão", "do", "pacote", "acho", "que", "problema", "está", "na",
    "configuração", "podemos", "rever", "alteração", "amanhã", "de", "manhã", "seria",
    "ótimo", "ter", "mais", "testes", "antes", "lançamento", "documentação", "explica",
    "como", "instalar", "em", "sistemas", "antigos", "obrigado", "pela", "ajuda"};
constexpr std::string_view kProseEsA[] = {
    "el", "servidor", "no", "responde", "cuando", "intento", "compilar", "proyecto", "con",
    "la", "nueva", "versión", "del", "paquete", "creo", "que", "problema", "está", "en",
    "configuración", "podemos", "revisar", "cambio", "mañana", "por", "tarde", "sería",
    "genial", "tener", "más", "pruebas", "antes", "lanzamiento", "documentación", "explica",
    "cómo", "instalar", "sistemas", "antiguos", "ayuda", "lista"};
constexpr std::string_view kProseFrA[] = {
    "le", "serveur", "ne", "répond", "pas", "quand", "j'essaie", "de", "compiler", "projet",
    "avec", "la", "nouvelle", "version", "du", "paquet", "je", "pense", "que", "problème",
    "vient", "configuration", "nous", "pouvons", "revoir", "modification", "demain", "matin",
    "il", "serait", "utile", "d'avoir", "plus", "tests", "avant", "sortie", "documentation",
    "explique", "comment", "installer", "sur", "anciens", "systèmes"};

constexpr std::string_view kHeadEnA[] = {"Steps to reproduce:", "Expected behaviour:",
                                         "Summary:"};
constexpr std::string_view kHeadPtA[] = {"Passos para reproduzir:", "Resumo:"};
constexpr std::string_view kHeadEsA[] = {"Pasos para reproducir:", "Resumen:"};
constexpr std::string_view kHeadFrA[] = {"Étapes pour reproduire :", "Résumé :"};

constexpr std::string_view kClientEnA[] = {
    "Sent from my iPhone", "Get Outlook for Android",
    "To unsubscribe, e-mail: dev-unsubscribe@project.org",
    "https://lists.project.org/mailman/listinfo/dev"};
constexpr std::string_view kClientPtA[] = {"Enviado do meu iPhone",
                                           "Enviado do meu smartphone Samsung Galaxy.",
                                           "https://listas.projeto.org.br/mailman/listinfo/dev"};
constexpr std::string_view kClientEsA[] = {"Enviado desde mi iPhone",
                                           "Enviado desde mi dispositivo Android",
                                           "https://listas.proyecto.es/mailman/listinfo/dev"};
constexpr std::string_view kClientFrA[] = {"Envoyé de mon iPhone",
                                           "Envoyé depuis mon appareil mobile Orange",
                                           "https://listes.projet.fr/mailman/listinfo/dev"};

constexpr std::string_view kTitleEnA[] = {"Software Engineer, Acme Corp.",
                                          "Release Manager | Apache Foo", "PhD Student"};
constexpr std::string_view kTitlePtA[] = {"Engenheira de Software, Acme Lda.",
                                          "Analista de Sistemas"};
constexpr std::string_view kTitleEsA[] = {"Ingeniero de Software, Acme S.L.",
                                          "Administrador de Sistemas"};
constexpr std::string_view kTitleFrA[] = {"Ingénieur logiciel, Acme SARL",
                                          "Administrateur systèmes"};

// ---- domain B -------------------------------------------------------------

constexpr std::string_view kGreetEnB[] = {"Hey {}!", "Good morning {},", "Greetings,"};
constexpr std::string_view kGreetPtB[] = {"Prezado {},", "Boa tarde,", "Prezada equipe,"};
constexpr std::string_view kGreetEsB[] = {"Estimada {},", "Buenas tardes,", "Hola a todos,"};
constexpr std::string_view kGreetFrB[] = {"Madame,", "Monsieur {},", "Bonjour à tous,"};

constexpr std::string_view kCloseEnB[] = {"Kind regards,", "Many thanks,", "Sincerely,"};
constexpr std::string_view kClosePtB[] = {"Cumprimentos,", "Obrigada,", "Saudações,"};
constexpr std::string_view kCloseEsB[] = {"Atentamente,", "Muchas gracias,",
                                          "Saludos cordiales,"};
constexpr std::string_view kCloseFrB[] = {"Bien à vous,", "Bien cordialement,", "À bientôt,"};

constexpr std::string_view kProseEnB[] = {
    "our", "quarterly", "budget", "meeting", "moved", "to", "Thursday", "afternoon",
    "finance", "team", "needs", "updated", "invoices", "from", "every", "department",
    "contract", "renewal", "was", "signed", "yesterday", "and", "legal", "approved",
    "clause", "regarding", "delivery", "dates", "let", "me", "know", "if", "schedule",
    "works", "for", "your", "group", "attached", "spreadsheet", "lists", "open", "items"};
constexpr std::string_view kProsePtB[] = {
    "a", "reunião", "de", "orçamento", "foi", "remarcada", "para", "quinta", "feira",
    "equipa", "financeira", "precisa", "das", "faturas", "atualizadas", "cada",
    "departamento", "contrato", "assinado", "ontem", "e", "jurídico", "aprovou", "cláusula",
    "sobre", "prazos", "entrega", "avisem", "se", "horário", "funciona", "vocês", "planilha",
    "anexa", "lista", "itens", "pendentes"};
constexpr std::string_view kProseEsB[] = {
    "la", "reunión", "de", "presupuesto", "se", "movió", "al", "jueves", "por", "tarde",
    "equipo", "financiero", "necesita", "facturas", "actualizadas", "cada", "departamento",
    "contrato", "fue", "firmado", "ayer", "y", "legal", "aprobó", "cláusula", "sobre",
    "fechas", "entrega", "avisadme", "si", "horario", "funciona", "vuestro", "grupo",
    "hoja", "adjunta", "enumera", "pendientes"};
constexpr std::string_view kProseFrB[] = {
    "la", "réunion", "budgétaire", "a", "été", "déplacée", "à", "jeudi", "après-midi",
    "l'équipe", "financière", "a", "besoin", "des", "factures", "mises", "jour", "chaque",
    "service", "contrat", "signé", "hier", "et", "le", "juridique", "approuvé", "clause",
    "concernant", "délais", "livraison", "dites-moi", "si", "calendrier", "convient",
    "votre", "groupe", "tableur", "joint", "liste", "points", "ouverts"};

constexpr std::string_view kHeadEnB[] = {"Action items:", "Agenda:"};
constexpr std::string_view kHeadPtB[] = {"Pendências:", "Pauta:"};
constexpr std::string_view kHeadEsB[] = {"Tareas pendientes:", "Agenda:"};
constexpr std::string_view kHeadFrB[] = {"Actions à mener :", "Ordre du jour :"};

constexpr std::string_view kClientEnB[] = {"Sent with ProtonMail Secure Email.",
                                           "Sent from Mail for Windows 10",
                                           "https://groups.example.net/forum/#!forum/users"};
constexpr std::string_view kClientPtB[] = {"Enviado pelo Mail para Windows 10",
                                           "https://grupos.exemplo.com.br/forum/usuarios"};
constexpr std::string_view kClientEsB[] = {"Enviado desde Correo para Windows 10",
                                           "https://grupos.ejemplo.es/foro/usuarios"};
constexpr std::string_view kClientFrB[] = {"Envoyé à partir de Courrier pour Windows 10",
                                           "https://groupes.exemple.fr/forum/utilisateurs"};

constexpr std::string_view kTitleEnB[] = {"Account Manager, Globex Inc.",
                                          "Head of Procurement"};
constexpr std::string_view kTitlePtB[] = {"Gerente de Contas, Globex S.A."};
constexpr std::string_view kTitleEsB[] = {"Directora Comercial, Globex S.A."};
constexpr std::string_view kTitleFrB[] = {"Responsable des achats, Globex SA"};

const Lexicon kLexicons[2][kLangCount] = {
    {
        {kGreetEnA, kCloseEnA, kProseEnA, kHeadEnA, "On {}, {} <{}> wrote:",
         {"From: ", "Sent: ", "To: ", "Subject: "}, kClientEnA, kTitleEnA},
        {kGreetPtA, kClosePtA, kProsePtA, kHeadPtA, "Em {}, {} <{}> escreveu:",
         {"De: ", "Enviado: ", "Para: ", "Assunto: "}, kClientPtA, kTitlePtA},
        {kGreetEsA, kCloseEsA, kProseEsA, kHeadEsA, "El {}, {} <{}> escribió:",
         {"De: ", "Enviado el: ", "Para: ", "Asunto: "}, kClientEsA, kTitleEsA},
        {kGreetFrA, kCloseFrA, kProseFrA, kHeadFrA, "Le {}, {} <{}> a écrit :",
         {"De : ", "Envoyé : ", "À : ", "Objet : "}, kClientFrA, kTitleFrA},
    },
    {
        {kGreetEnB, kCloseEnB, kProseEnB, kHeadEnB, "{1} <{2}> wrote on {0}:",
         {"From: ", "Date: ", "To: ", "Subject: "}, kClientEnB, kTitleEnB},
        {kGreetPtB, kClosePtB, kProsePtB, kHeadPtB, "{1} <{2}> escreveu em {0}:",
         {"De: ", "Data: ", "Para: ", "Assunto: "}, kClientPtB, kTitlePtB},
        {kGreetEsB, kCloseEsB, kProseEsB, kHeadEsB, "{1} <{2}> escribió el {0}:",
         {"De: ", "Fecha: ", "Para: ", "Asunto: "}, kClientEsB, kTitleEsB},
        {kGreetFrB, kCloseFrB, kProseFrB, kHeadFrB, "{1} <{2}> a écrit le {0} :",
         {"De : ", "Date : ", "À : ", "Objet : "}, kClientFrB, kTitleFrB},
    },
};

constexpr std::string_view kFirstNames[] = {"Ana",   "João",  "Maria", "Pedro", "Lucía",
                                            "Javier", "Camille", "Julien", "John", "Emma",
                                            "Carlos", "Sophie"};
constexpr std::string_view kLastNames[] = {"Silva",  "Santos", "García", "Martínez",
                                           "Dubois", "Lefebvre", "Smith", "Johnson",
                                           "Pereira", "Moreau"};
constexpr std::string_view kMonths[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                        "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

constexpr std::string_view kCodeSnippets[][4] = {
    {"    for (int i = 0; i < n; ++i) {", "        total += values[i];", "    }",
     "    return total;"},
    {"    def load(path):", "        with open(path) as f:", "            return json.load(f)",
     ""},
    {"    if (conn == NULL) {", "        fprintf(stderr, \"no connection\\n\");",
     "        return -1;", "    }"},
    {"    <dependency>", "      <artifactId>foo-core</artifactId>", "    </dependency>", ""},
};

constexpr std::string_view kLogLevels[] = {"ERROR", "WARN", "INFO", "DEBUG"};
constexpr std::string_view kLogSources[] = {"[main] org.apache.foo.Server",
                                            "[worker-3] c.e.pipeline.Stage",
                                            "kernel: usb 1-1", "[pool-1-thread-2] db.Pool"};
constexpr std::string_view kLogMessages[] = {"Connection refused", "Retrying in 5s",
                                             "Timeout after 30000 ms", "Cache miss for key=42",
                                             "Started in 3.2 seconds"};

constexpr std::string_view kTechnical[] = {
    "Kernel 5.4.0-42-generic x86_64, gcc 9.3.0, cmake 3.16.3",
    "Java 1.8.0_252 (OpenJDK 64-Bit Server VM 25.252-b09)",
    "Python 3.8.5 (default, Jul 28 2020, 12:59:40) [GCC 9.3.0] on linux",
    "PostgreSQL 12.4, libpq 12.4, OpenSSL 1.1.1f 31 Mar 2020"};

constexpr std::string_view kTablePackages[] = {"libfoo", "barctl", "bazd", "quxlib",
                                               "zlib", "openssl"};
constexpr std::string_view kTableStatus[] = {"ok", "FAIL", "skip", "n/a"};

class Generator {
 public:
  Generator(std::uint64_t seed, SyntheticDomain domain)
      : rng_(seed), domain_(domain == SyntheticDomain::kA ? 0 : 1) {}

  AnnotatedEmail email(const std::string& id) {
    lines_.clear();
    zones_.clear();
    lang_ = static_cast<int>(uniform_index(rng_, kLangCount));
    const Lexicon& lex = kLexicons[domain_][lang_];
    const std::string sender = full_name();

    if (chance(0.85)) {
      add("salutation", fmt::format(fmt::runtime(pick(lex.greetings)), pick(kFirstNames)));
      blank();
    }
    const int blocks = 1 + static_cast<int>(uniform_index(rng_, 3));
    for (int b = 0; b < blocks; ++b) {
      if (b > 0 || chance(0.3)) technical_block();
      if (chance(0.08)) {
        add("section_heading", std::string(pick(lex.headings)));
      }
      paragraph(lex, "paragraph", "");
      blank();
    }
    if (chance(0.1)) add("visual_separator", separator());
    add("closing", std::string(pick(lex.closings)));
    add("personal_signature", sender);
    if (chance(0.4)) add("personal_signature", std::string(pick(lex.titles)));
    if (chance(0.2)) add("personal_signature", phone());
    if (chance(0.45)) {
      blank();
      add("mua_signature", "-- ");
      add("mua_signature", std::string(pick(lex.client_lines)));
      if (chance(0.3)) add("mua_signature", std::string(pick(lex.client_lines)));
    }
    if (chance(0.8)) quoted_block(lex);
    return AnnotatedEmail(Email(id, std::string(kLangTags[lang_]), lines_), zones_);
  }

 private:
  bool chance(double p) { return uniform_unit(rng_) < p; }

  template <typename Seq>
  auto pick(const Seq& items) -> decltype(items[0]) {
    return items[uniform_index(rng_, std::size(items))];
  }

  void add(std::string_view zone, std::string line) {
    lines_.push_back(std::move(line));
    zones_.emplace_back(zone);
  }

  void blank() { add("visual_separator", ""); }

  std::string separator() {
    const char ch = domain_ == 0 ? '-' : '=';
    return std::string(20 + uniform_index(rng_, 40), ch);
  }

  std::string full_name() {
    return fmt::format("{} {}", pick(kFirstNames), pick(kLastNames));
  }

  std::string address(const std::string& name) {
    std::string local;
    for (char ch : name) {
      if (ch == ' ') {
        local.push_back('.');
      } else if (static_cast<unsigned char>(ch) < 0x80) {
        local.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
      }
    }
    constexpr std::string_view kHosts[2][3] = {{"project.org", "example.com", "lists.dev"},
                                               {"globex.com", "corp.example", "mail.biz"}};
    return local + "@" + std::string(pick(kHosts[domain_]));
  }

  std::string date() {
    return fmt::format("{} {} {} {:02}:{:02}", 1 + uniform_index(rng_, 28), pick(kMonths),
                       2015 + uniform_index(rng_, 8), uniform_index(rng_, 24),
                       uniform_index(rng_, 60));
  }

  std::string phone() {
    return fmt::format("+{} {} {:03} {:03}", 30 + uniform_index(rng_, 60),
                       100 + uniform_index(rng_, 900), uniform_index(rng_, 1000),
                       uniform_index(rng_, 1000));
  }

  // A sentence-like line of prose that the lexicon features do not mistake
  // for a greeting or closing.
  std::string prose_line(const Lexicon& lex) {
    for (;;) {
      const int words = 6 + static_cast<int>(uniform_index(rng_, 9));
      std::string line;
      for (int w = 0; w < words; ++w) {
        std::string word(pick(lex.prose));
        if (w == 0 && !word.empty() && word[0] >= 'a' && word[0] <= 'z') {
          word[0] = static_cast<char>(word[0] - 'a' + 'A');
        }
        if (w > 0) line += ' ';
        line += word;
      }
      line += chance(0.15) ? "?" : ".";
      if (!is_greeting(line) && !is_closing(line)) return line;
    }
  }

  void paragraph(const Lexicon& lex, std::string_view zone, const std::string& prefix) {
    const int n = 1 + static_cast<int>(uniform_index(rng_, 4));
    for (int i = 0; i < n; ++i) add(zone, prefix + prose_line(lex));
  }

  void technical_block() {
    const double roll = uniform_unit(rng_);
    if (roll < 0.30) {
      const auto& snippet = pick(kCodeSnippets);
      for (std::string_view line : snippet) {
        if (!line.empty()) add("raw_code", std::string(line));
      }
    } else if (roll < 0.55) {
      const int n = 2 + static_cast<int>(uniform_index(rng_, 4));
      for (int i = 0; i < n; ++i) {
        add("log_data", fmt::format("2020-{:02}-{:02} {:02}:{:02}:{:02},{:03} {} {} - {}",
                                    1 + uniform_index(rng_, 12), 1 + uniform_index(rng_, 28),
                                    uniform_index(rng_, 24), uniform_index(rng_, 60),
                                    uniform_index(rng_, 60), uniform_index(rng_, 1000),
                                    pick(kLogLevels), pick(kLogSources), pick(kLogMessages)));
      }
    } else if (roll < 0.65) {
      add("patch", "diff --git a/src/main.c b/src/main.c");
      add("patch", "--- a/src/main.c");
      add("patch", "+++ b/src/main.c");
      add("patch", fmt::format("@@ -{0},7 +{0},8 @@ int main(void)", 10 + uniform_index(rng_, 90)));
      add("patch", "-    old_call();");
      add("patch", "+    new_call(ctx);");
    } else if (roll < 0.80) {
      add("tabular", "Package    | Version | Status");
      const int rows = 2 + static_cast<int>(uniform_index(rng_, 3));
      for (int i = 0; i < rows; ++i) {
        add("tabular", fmt::format("{:<10} | {}.{}.{}   | {}", pick(kTablePackages),
                                   uniform_index(rng_, 4), uniform_index(rng_, 10),
                                   uniform_index(rng_, 10), pick(kTableStatus)));
      }
    } else {
      add("technical", std::string(pick(kTechnical)));
      if (chance(0.5)) add("technical", std::string(pick(kTechnical)));
    }
    blank();
  }

  void quoted_block(const Lexicon& lex) {
    blank();
    const std::string author = full_name();
    const std::string from = address(author);
    if (chance(0.25)) {
      add("visual_separator", domain_ == 0 ? "-----Original Message-----"
                                           : std::string(32, '_'));
      add("inline_headers", std::string(lex.header_keys[0]) + author + " <" + from + ">");
      add("inline_headers", std::string(lex.header_keys[1]) + date());
      add("inline_headers", std::string(lex.header_keys[2]) + address(full_name()));
      add("inline_headers", std::string(lex.header_keys[3]) + "Re: " + prose_line(lex));
      blank();
    } else {
      add("quotation_marker",
          fmt::format(fmt::runtime(lex.quote_marker), date(), author, from));
    }
    const std::string prefix = domain_ == 0 ? "> " : ">";
    const std::string empty_quote = ">";
    const int paragraphs = 2 + static_cast<int>(uniform_index(rng_, 4));
    for (int p = 0; p < paragraphs; ++p) {
      if (p > 0) add("quotation", empty_quote);
      const bool nested = p == paragraphs - 1 && chance(0.3);
      paragraph(lex, "quotation", nested ? prefix + prefix : prefix);
    }
    if (chance(0.5)) {
      add("quotation", empty_quote);
      add("quotation", prefix + std::string(pick(lex.closings)));
      add("quotation", prefix + author);
    }
  }

  Rng rng_;
  int domain_;
  int lang_ = 0;
  std::vector<std::string> lines_;
  std::vector<std::string> zones_;
};

}  // namespace

Corpus generate_synthetic_corpus(int n_emails, const Taxonomy& taxonomy, std::uint64_t seed,
                                 SyntheticDomain domain) {
  if (n_emails < 1) throw ValidationError("n_emails must be at least 1");
  const TaxonomyRegistry registry;
  const Taxonomy& gmane = registry.get("gmane15");
  const TaxonomyMapping mapping = gmane.mapping(taxonomy.name());

  Generator generator(seed, domain);
  const char tag = domain == SyntheticDomain::kA ? 'a' : 'b';
  std::vector<AnnotatedEmail> emails;
  emails.reserve(static_cast<std::size_t>(n_emails));
  for (int i = 0; i < n_emails; ++i) {
    AnnotatedEmail annotated =
        generator.email(fmt::format("synth-{}-{}-{:05}", tag, seed, i));
    emails.push_back(map_annotation(annotated, mapping));
  }
  return Corpus(fmt::format("synthetic-{}-{}", tag, seed), taxonomy, std::move(emails));
}

}  // namespace zoneseg
