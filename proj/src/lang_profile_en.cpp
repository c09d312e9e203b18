#include "finset/curation.hpp"

namespace finset {

namespace {

// Seed text for the shipped English profile: generic English prose with a
// financial-news register, matching the corpus the pipeline targets.
constexpr const char* kEnglishSeed = R"(
The company reported that quarterly revenue increased compared with the same
period a year earlier, while net income declined on higher interest expenses.
Analysts said the results were broadly in line with expectations, although the
outlook for the second half of the year remains uncertain. Shares of the firm
rose in early trading before giving back most of their gains by the close.

Investors have been watching the central bank closely for signals about the
path of interest rates. Officials have indicated that further increases are
possible if inflation does not continue to slow. The bond market reacted to
the latest economic data with a modest rally, and the yield on the ten year
note fell slightly. Currency markets were little changed on the day.

The board of directors approved a new share repurchase program and raised the
quarterly dividend. Management said the decision reflects confidence in the
strength of the balance sheet and the durability of free cash flow. The chief
financial officer told investors that capital spending would be focused on
projects with the highest expected returns.

In other news, regulators announced a review of disclosure practices among
large public companies. The agency said it would examine whether firms are
providing investors with timely and accurate information about material risks.
Several industry groups said they would cooperate with the review and noted
that most companies already meet or exceed the proposed standards.

Economists expect growth to moderate over the coming quarters as the effects
of earlier policy tightening work through the economy. Consumer spending has
held up better than expected, supported by a strong labor market and rising
wages. Business investment, however, has softened, and surveys point to more
caution among manufacturers. Housing activity remains weak, though there are
early signs of stabilization in some regions.

Many people believe that markets tell a story about the future. Every day,
traders and investors around the world buy and sell because they disagree
about what that story should be. When news arrives, prices move quickly, and
those movements carry information of their own. Over long periods the market
has rewarded patience, but over short periods it can punish even careful
judgment. This is why most advisers tell their clients to think in years
rather than days, to hold a diversified portfolio, and to avoid making large
changes in response to headlines they cannot control.

The town sat at the edge of a wide valley, where a river ran slowly between
old stone bridges. In the morning, people walked to work along narrow streets,
past bakeries and small shops that had been there for generations. Children
went to school carrying their books and lunches, and in the afternoon they
played in the park near the church. On weekends, families took the train to
the coast or drove into the hills to walk among the trees. The weather was
mild for most of the year, with warm summers and cold, clear winters.

She opened the window and looked out over the garden. The rain had stopped
during the night, and the grass was still wet under the first light of the
sun. A bird landed on the fence, looked around, and flew away again. She made
a cup of tea, sat down at the kitchen table, and began to write a letter to
her brother, who lived in another city. There was much to tell him about the
house, the neighbors, and the small things that fill a quiet life. When the
letter was finished, she walked to the post office at the end of the road.

Good writing begins with clear thinking. Before you put words on a page, ask
yourself what you want the reader to understand and why it matters. Use short
sentences where you can, and choose familiar words over rare ones. Read your
work aloud, and cut anything that does not help. Most of all, remember that
the reader's time is a gift, and that every paragraph must earn its place.
)";

}  // namespace

const LangProfile& english_profile() {
    static const LangProfile profile = LangProfile::from_text("en", kEnglishSeed);
    return profile;
}

}  // namespace finset
