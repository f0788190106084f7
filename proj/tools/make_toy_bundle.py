#!/usr/bin/env python3
# Copyright 2026 The chainattack Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates data/bundle and data/toy.

Needs: pip install pypinyin jieba cmudict hanzi_chaizi numpy
The committed files are the output of this script; running it again with the
same package versions reproduces them byte for byte.
"""

import argparse
import os
import random
from collections import defaultdict

import cmudict
import jieba
import numpy as np
from hanzi_chaizi import HanziChaizi
from pypinyin import Style, lazy_pinyin, pinyin

TOP_WORDS = 4000
EMBED_DIM = 16
VISUAL_K = 5

# Curated Chinese -> English entries. Multi-word glosses are allowed.
TRANSLATIONS = {
    "幼稚": ["naive", "childish", "immature"],
    "牛逼": ["awesome", "badass"],
    "好": ["good", "nice", "fine"],
    "快": ["fast", "quick", "rapid"],
    "慢": ["slow", "sluggish"],
    "差": ["bad", "poor"],
    "辛苦": ["toil", "hard work", "laborious"],
    "满意": ["satisfied", "pleased"],
    "好吃": ["tasty", "delicious", "yummy"],
    "美味": ["delicious", "tasty"],
    "新鲜": ["fresh", "new"],
    "热情": ["warm", "enthusiastic", "passion"],
    "干净": ["clean", "neat"],
    "实惠": ["affordable", "bargain"],
    "喜欢": ["like", "love", "enjoy"],
    "不错": ["nice", "decent", "good"],
    "推荐": ["recommend"],
    "贴心": ["caring", "considerate"],
    "专业": ["professional", "expert"],
    "划算": ["worth", "bargain"],
    "优秀": ["excellent", "outstanding"],
    "完美": ["perfect", "flawless"],
    "舒服": ["comfortable", "cozy"],
    "棒": ["great", "stick"],
    "赞": ["praise", "great"],
    "难吃": ["awful", "unpalatable"],
    "失望": ["disappointed", "letdown"],
    "糟糕": ["terrible", "awful", "lousy"],
    "冷": ["cold", "chilly"],
    "脏": ["dirty", "filthy"],
    "贵": ["expensive", "pricey", "costly"],
    "垃圾": ["garbage", "trash", "rubbish"],
    "恶心": ["gross", "disgusting", "nausea"],
    "敷衍": ["perfunctory", "sloppy"],
    "后悔": ["regret", "remorse"],
    "难受": ["uncomfortable", "miserable"],
    "烂": ["rotten", "lousy"],
    "粗暴": ["rude", "rough", "brutal"],
    "生气": ["angry", "mad"],
    "差劲": ["crappy", "inferior"],
    "退款": ["refund"],
    "差评": ["negative review"],
    "好评": ["positive review"],
    "服务": ["service", "serve"],
    "速度": ["speed", "velocity"],
    "味道": ["taste", "flavor"],
    "今天": ["today"],
    "价格": ["price", "cost"],
    "质量": ["quality"],
    "快递员": ["courier", "deliveryman"],
    "态度": ["attitude", "manner"],
    "包装": ["package", "packing"],
    "环境": ["environment", "ambience"],
    "老板": ["boss", "owner"],
    "外卖": ["takeout", "delivery"],
    "笑": ["laugh", "smile"],
    "大声": ["loud", "aloud"],
    "他妈的": ["damn", "fuck"],
    "日": ["day", "sun"],
    "说": ["say", "speak"],
    "号": ["number", "size"],
}

# Conventional transliteration characters per toneless syllable.
TRANSLIT_CHARS = {
    "a": "阿", "ba": "巴", "bai": "拜", "ban": "班", "bei": "贝", "bi": "比",
    "bo": "波", "bu": "布", "ka": "卡", "da": "达", "dai": "代", "dan": "丹",
    "de": "德", "di": "迪", "du": "杜", "duo": "多", "e": "厄", "er": "尔",
    "fa": "发", "fei": "菲", "fu": "服", "gai": "盖", "ge": "格", "gu": "古",
    "ha": "哈", "hai": "海", "han": "汉", "he": "赫", "hu": "胡", "huo": "霍",
    "ji": "吉", "jia": "加", "jie": "杰", "jin": "金", "kai": "凯", "ke": "克",
    "ku": "库", "la": "拉", "lai": "莱", "lan": "兰", "le": "勒", "lei": "雷",
    "li": "里", "lu": "卢", "luo": "罗", "ma": "马", "mai": "迈", "man": "曼",
    "mei": "梅", "men": "门", "mi": "米", "mu": "姆", "na": "拿", "nai": "奈",
    "nan": "南", "nei": "内", "ni": "尼", "nu": "努", "nuo": "诺", "pa": "帕",
    "pai": "派", "pan": "潘", "pei": "佩", "pi": "皮", "pu": "普", "qi": "奇",
    "qia": "恰", "qiao": "乔", "qie": "切", "sa": "萨", "sai": "赛", "sang": "桑",
    "se": "瑟", "sen": "森", "sha": "沙", "xie": "谢", "shi": "什", "shu": "舒",
    "si": "思", "suo": "索", "ta": "塔", "tai": "泰", "tan": "坦", "te": "特",
    "ti": "提", "tu": "图", "tuo": "托", "wa": "瓦", "wan": "万", "wei": "威",
    "wo": "沃", "wu": "乌", "xi": "西", "xia": "夏", "xiao": "肖", "xin": "辛",
    "xiu": "休", "ya": "亚", "yang": "扬", "ye": "耶", "yi": "衣", "you": "尤",
    "yue": "约", "za": "扎", "ze": "泽", "zhan": "詹", "zi": "兹", "zhu": "朱",
    "zhuo": "卓", "zu": "祖", "zuo": "佐", "ao": "奥", "ai": "艾", "ou": "欧",
    "ei": "埃", "ri": "日", "ge": "格", "gao": "高", "lao": "劳", "mao": "毛",
    "tao": "陶", "dao": "道", "bao": "保", "hao": "豪", "kao": "考", "pao": "泡",
    "sao": "骚", "zao": "藻", "chi": "齐", "che": "彻", "cha": "查", "zhi": "芝",
    "zha": "扎", "shou": "寿", "lou": "楼", "mou": "谋", "dou": "斗", "tou": "头",
}

# ARPAbet consonant -> ranked pinyin initials.
INITIALS = {
    "B": ["b"], "CH": ["q", "ch"], "D": ["d"], "DH": ["d", "z"], "F": ["f"],
    "G": ["g"], "HH": ["h"], "JH": ["zh", "j"], "K": ["k"], "L": ["l"],
    "M": ["m"], "N": ["n"], "NG": ["n"], "P": ["p"], "R": ["l", "r"],
    "S": ["s", "x"], "SH": ["sh", "x"], "T": ["t"], "TH": ["s", "x"],
    "V": ["f", "w"], "W": ["w"], "Y": ["y"], "Z": ["z"], "ZH": ["zh", "r"],
}
# ARPAbet vowel -> ranked pinyin finals.
FINALS = {
    "AA": ["a", "ao"], "AE": ["a", "ai"], "AH": ["a", "e"], "AO": ["ao", "o"],
    "AW": ["ao"], "AY": ["a", "ai"], "EH": ["ai", "ei", "e"], "ER": ["er", "e"],
    "EY": ["ei", "ai"], "IH": ["i", "ei"], "IY": ["i"], "OW": ["ou", "uo", "o"],
    "OY": ["ao", "uo"], "UH": ["u"], "UW": ["u", "ou"],
}
# Standalone consonants and vowels.
LONE = {
    "B": ["bu"], "CH": ["qi", "chi"], "D": ["de"], "DH": ["de"], "F": ["fu"],
    "G": ["ge"], "HH": ["he"], "JH": ["ji"], "K": ["ke"], "L": ["er", "le"],
    "M": ["mu"], "N": ["en", "n"], "NG": ["en"], "P": ["pu"], "R": ["er"],
    "S": ["si"], "SH": ["shi"], "T": ["te"], "TH": ["si"], "V": ["fu"],
    "W": ["wu"], "Y": ["yi"], "Z": ["zi"], "ZH": ["ri"],
    "AA": ["a"], "AE": ["ai", "a"], "AH": ["a", "e"], "AO": ["ao"], "AW": ["ao"],
    "AY": ["ai"], "EH": ["ai", "ei"], "ER": ["er"], "EY": ["ei", "ai"],
    "IH": ["yi"], "IY": ["yi"], "OW": ["ou"], "OY": ["ao"], "UH": ["wu"],
    "UW": ["wu"],
}

# Visual neighbours that decomposition overlap cannot find.
VISUAL_EXTRA = {
    "日": [("曰", 0.95), ("目", 0.8)],
    "曰": [("日", 0.95)],
    "辛": [("刑", 0.6), ("幸", 0.7)],
    "己": [("已", 0.95), ("巳", 0.9)],
    "未": [("末", 0.95)],
    "土": [("士", 0.95)],
    "人": [("入", 0.9)],
}

# Hanzify frequency adjustment for surname readings.
FREQ_ADJUST = {"郝": 2500}

STOP_COMPONENTS = set("一丨丶丿乙亅")

# ---------------------------------------------------------------- dataset

TIMES = ["今天", "这次", "昨天", "上次", "周末", "中午", "晚上", "刚才"]
OWNERS = ["快递员的", "外卖的", "店家的", "这家店的", "餐厅的", "商家的", ""]
ASPECTS = ["速度", "服务", "味道", "态度", "包装", "价格", "质量", "环境",
           "米饭", "菜", "物流", "老板", "骑手", "商品", "东西", "汤"]
FOODS = ["外卖", "米饭", "面条", "饺子", "汉堡", "披萨", "炒饭", "奶茶"]
ADVS = ["很", "非常", "比较", "特别", "挺", "真", "太", "超级"]
POS_ADJ = ["好", "快", "棒", "不错", "满意", "新鲜", "热情", "干净", "实惠",
           "好吃", "美味", "贴心", "专业", "划算", "舒服", "完美", "优秀"]
NEG_ADJ = ["差", "慢", "难吃", "糟糕", "冷", "脏", "贵", "烂", "敷衍", "粗暴",
           "恶心", "难受", "差劲", "垃圾"]
POS_CLOSE = ["辛苦了！", "下次还来！", "五星好评！", "推荐大家！", "非常喜欢！",
             "赞一个！", "会回购的。"]
NEG_CLOSE = ["再也不来了！", "差评！", "太失望了！", "非常后悔！", "要求退款！",
             "很生气！", "不会回购。"]

TEMPLATES = [
    "{time}{owner}{aspect}{adv}{adj1}，{aspect2}也{adj2}，{close}",
    "{aspect}{adv}{adj1}，{close}",
    "{time}点的{food}{adv}{adj1}，{aspect2}{adj2}，{close}",
    "{owner}{aspect}{adv}{adj1}，{aspect2}也{adv}{adj2}。",
    "{time}的{food}{adj1}，{close}",
]


def make_sentence(rng, positive):
    adj = POS_ADJ if positive else NEG_ADJ
    close = POS_CLOSE if positive else NEG_CLOSE
    tpl = rng.choice(TEMPLATES)
    aspect, aspect2 = rng.sample(ASPECTS, 2)
    return tpl.format(time=rng.choice(TIMES), owner=rng.choice(OWNERS),
                      aspect=aspect, aspect2=aspect2, adv=rng.choice(ADVS),
                      adj1=rng.choice(adj), adj2=rng.choice(adj),
                      close=rng.choice(close), food=rng.choice(FOODS))


def make_split(rng, per_class, seen):
    rows = []
    for label in (0, 1):
        count = 0
        while count < per_class:
            s = make_sentence(rng, label == 1)
            if s in seen:
                continue
            seen.add(s)
            rows.append((label, s))
            count += 1
    rng.shuffle(rows)
    return rows


def dataset_words():
    words = set(TIMES + ASPECTS + FOODS + ADVS + POS_ADJ + NEG_ADJ)
    words.update(w for w in OWNERS if w)
    words.update(["也", "的", "点", "，", "。", "！", "了", "辛苦", "下次", "还",
                  "来", "五星", "好评", "推荐", "大家", "非常", "喜欢", "赞",
                  "一个", "会", "回购", "再也", "不", "差评", "失望", "后悔",
                  "要求", "退款", "生气", "不会", "快递员", "外卖", "店家",
                  "这家", "店", "餐厅", "商家", "太"])
    return words


# ---------------------------------------------------------------- helpers


def is_cjk(ch):
    return 0x4E00 <= ord(ch) <= 0x9FFF


def jieba_freqs():
    path = os.path.join(os.path.dirname(jieba.__file__), "dict.txt")
    out = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            w, freq, _ = line.split(" ")
            out[w] = int(freq)
    return out


def readings(ch):
    rs = pinyin(ch, style=Style.NORMAL, heteronym=True)[0]
    first = lazy_pinyin(ch)[0]
    out = [first] + [r for r in rs if r != first]
    return [r for r in dict.fromkeys(out) if r.isascii() and r.isalpha()]


def leaves(chaizi, ch, depth=3):
    parts = chaizi.query(ch)
    if not parts or depth == 0 or parts == [ch]:
        return [ch]
    out = []
    for p in parts:
        out.extend(leaves(chaizi, p, depth - 1) if p != ch else [p])
    return out


def dice(a, b):
    ca, cb = defaultdict(int), defaultdict(int)
    for x in a:
        ca[x] += 1
    for x in b:
        cb[x] += 1
    common = sum(min(ca[k], cb[k]) for k in ca)
    return 2.0 * common / (len(a) + len(b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", default=os.path.join(os.path.dirname(__file__), ".."))
    args = ap.parse_args()
    bundle = os.path.join(args.root, "data", "bundle")
    toy = os.path.join(args.root, "data", "toy")
    os.makedirs(bundle, exist_ok=True)
    os.makedirs(toy, exist_ok=True)

    freqs = jieba_freqs()
    chaizi = HanziChaizi()

    # Vocabulary: frequent words + dataset words + glossary keys + their chars.
    top = sorted((w for w in freqs if 1 <= len(w) <= 4 and all(map(is_cjk, w))),
                 key=lambda w: (-freqs[w], w))[:TOP_WORDS]
    words = set(top) | dataset_words() | set(TRANSLATIONS)
    chars = {c for w in words for c in w if is_cjk(c)}
    chars |= {c for c in TRANSLIT_CHARS.values()}
    for lst in VISUAL_EXTRA.values():
        chars |= {c for c, _ in lst}
    chars |= set(VISUAL_EXTRA)
    chars |= set("号郝豪毫浩耗特喵的他妈拿衣服发思刑女子幺力禾隹")

    # Disassembly: two standalone components, unambiguous inverse.
    disassembly = {}
    owner = {}
    for c in sorted(chars, key=lambda c: (-freqs.get(c, 1), c)):
        parts = chaizi.query(c)
        if not parts or len(parts) != 2:
            continue
        if any(p == c or not is_cjk(p) or p in STOP_COMPONENTS for p in parts):
            continue
        if not all(readings(p) for p in parts):
            continue
        comp = "".join(parts)
        if comp in owner:
            continue
        owner[comp] = c
        disassembly[c] = comp
    for comp in disassembly.values():
        chars |= set(comp)

    # Visual neighbours by decomposition-leaf overlap.
    leaf = {c: leaves(chaizi, c) for c in chars}
    inverted = defaultdict(set)
    for c, ls in leaf.items():
        for l in set(ls):
            inverted[l].add(c)
    visual = {}
    for c in sorted(chars):
        if len(leaf[c]) < 2:
            continue
        cands = set()
        for l in set(leaf[c]):
            if len(inverted[l]) < 200:
                cands |= inverted[l]
        cands.discard(c)
        scored = [(o, round(dice(leaf[c], leaf[o]), 4)) for o in cands]
        scored = [(o, s) for o, s in scored if s >= 0.5 and len(leaf[o]) >= 2]
        visual[c] = scored
    for c, extra in VISUAL_EXTRA.items():
        merged = dict(visual.get(c, []))
        for o, s in extra:
            merged[o] = max(merged.get(o, 0.0), s)
        visual[c] = list(merged.items())
    for c in list(visual):
        visual[c] = sorted(visual[c], key=lambda p: (-p[1], ord(p[0])))[:VISUAL_K]
        if not visual[c]:
            del visual[c]

    # Pinyin for every character that can appear anywhere in the bundle.
    pinyin_table = {}
    for c in sorted(chars):
        rs = readings(c)
        if rs:
            pinyin_table[c] = rs
    words = {w for w in words if all(c in pinyin_table for c in w if is_cjk(c))}

    vocab = {}
    for w in words:
        vocab[w] = max(1, freqs.get(w, 1))
    for c in pinyin_table:
        vocab[c] = max(vocab.get(c, 1), freqs.get(c, 1))
    for c, f in FREQ_ADJUST.items():
        vocab[c] = f

    # Phonemes for every gloss word.
    cmu = cmudict.dict()
    en_words = sorted({w for gl in TRANSLATIONS.values() for g in gl for w in g.split()})
    phonemes = {}
    for w in en_words:
        if w in cmu:
            phonemes[w] = ["".join(ch for ch in p if ch.isalpha()) for p in cmu[w][0]]

    syllables = {s for rs in pinyin_table.values() for s in rs}

    def translit_entry(s):
        ch = TRANSLIT_CHARS.get(s)
        return f"{s}/{ch}" if ch and ch in pinyin_table and s in pinyin_table[ch] else s

    phoneme_map = {}
    for ph, lst in LONE.items():
        phoneme_map[ph] = [s for s in lst if s in syllables][:3]
    for c, inits in INITIALS.items():
        for v, fins in FINALS.items():
            out = []
            for i in inits:
                for f in fins:
                    s = i + f
                    if s in syllables and s not in out:
                        out.append(s)
            if out:
                phoneme_map[f"{c} {v}"] = out[:3]

    def write(name, rows):
        with open(os.path.join(bundle, name), "w", encoding="utf-8", newline="\n") as f:
            for r in rows:
                f.write(r + "\n")

    write("pinyin.tsv", [f"{c}\t{','.join(pinyin_table[c])}" for c in sorted(pinyin_table)])
    write("disassembly.tsv", [f"{c}\t{disassembly[c]}" for c in sorted(disassembly)])
    write("translations.tsv", [f"{w}\t{'|'.join(TRANSLATIONS[w])}" for w in sorted(TRANSLATIONS)])
    write("phonemes.tsv", [f"{w}\t{' '.join(phonemes[w])}" for w in sorted(phonemes)])
    write("phoneme_map.tsv", [f"{k}\t{','.join(translit_entry(s) for s in phoneme_map[k])}"
                              for k in sorted(phoneme_map) if phoneme_map[k]])
    write("visual.tsv", [f"{c}\t{','.join(f'{o}:{s:.4f}' for o, s in visual[c])}"
                         for c in sorted(visual)])
    write("vocab.tsv", [f"{w}\t{vocab[w]}" for w in sorted(vocab)])

    # Synthetic embeddings: hashed character vectors, words as normalised sums.
    def char_vec(c):
        g = np.random.default_rng(ord(c))
        return g.standard_normal(EMBED_DIM)

    tokens = sorted(vocab) + [chr(o) for o in range(ord("a"), ord("z") + 1)]
    rows = []
    for t in tokens:
        v = sum(char_vec(c) for c in t)
        v = v / np.linalg.norm(v)
        rows.append(t + "\t" + " ".join(f"{x:.9f}" for x in v))
    write("embeddings.tsv", rows)

    rng = random.Random(20240601)
    seen = set()
    for name, per_class in (("train.tsv", 200), ("test.tsv", 50)):
        with open(os.path.join(toy, name), "w", encoding="utf-8", newline="\n") as f:
            for label, s in make_split(rng, per_class, seen):
                f.write(f"{label}\t{s}\n")
    with open(os.path.join(toy, "classes.txt"), "w", encoding="utf-8") as f:
        f.write("negative\npositive\n")


if __name__ == "__main__":
    main()
